#include "distcheck/ast.hpp"

#include "distcheck/error.hpp"

namespace distcheck {

std::set<NodeId> DistributedInstance::nodes() const {
  std::set<NodeId> ks;
  for (const auto& [k, _] : local) ks.insert(k);
  return ks;
}

FactSet DistributedInstance::skipped() const {
  FactSet placed;
  for (const auto& [_, fs] : local) placed.insert(fs.begin(), fs.end());
  FactSet out;
  for (const Fact& f : global)
    if (!placed.count(f)) out.insert(f);
  return out;
}

std::set<Value> DistributedInstance::adom() const {
  std::set<Value> vs;
  for (const Fact& f : global) vs.insert(f.args.begin(), f.args.end());
  return vs;
}

Value Valuation::operator()(const Term& t) const {
  if (!t.is_var()) return *t.con;
  auto it = data.find(t.var);
  if (it == data.end())
    throw Error(ErrorCode::Internal, "unbound data variable " + t.var);
  return it->second;
}

NodeId Valuation::operator()(const NodeTerm& t) const {
  if (!t.is_var()) return *t.id;
  auto it = node.find(t.var);
  if (it == node.end())
    throw Error(ErrorCode::Internal, "unbound node variable " + t.var);
  return it->second;
}

Fact Valuation::operator()(const RelAtom& a) const {
  Fact f{a.rel, {}};
  f.args.reserve(a.args.size());
  for (const Term& t : a.args) f.args.push_back((*this)(t));
  return f;
}

std::set<std::string> data_vars(const RelAtom& a) {
  std::set<std::string> vs;
  for (const Term& t : a.args)
    if (t.is_var()) vs.insert(t.var);
  return vs;
}

std::set<std::string> data_vars(const std::vector<Atom>& atoms) {
  std::set<std::string> vs;
  for (const Atom& a : atoms)
    for (const Term& t : a.rel.args)
      if (t.is_var()) vs.insert(t.var);
  return vs;
}

std::set<std::string> data_vars(const std::vector<CompAtom>& comps) {
  std::set<std::string> vs;
  for (const CompAtom& c : comps) {
    if (c.lhs.is_var()) vs.insert(c.lhs.var);
    if (c.rhs.is_var()) vs.insert(c.rhs.var);
  }
  return vs;
}

std::set<std::string> node_vars(const std::vector<Atom>& atoms) {
  std::set<std::string> vs;
  for (const Atom& a : atoms)
    if (a.at && a.at->is_var()) vs.insert(a.at->var);
  return vs;
}

std::set<std::string> body_data_vars(const Constraint& c) {
  return data_vars(body_of(c));
}

const std::vector<Atom>& body_of(const Constraint& c) {
  if (const auto* t = std::get_if<Dtgd>(&c)) return t->body;
  return std::get<Degd>(c).body;
}

const std::vector<CompAtom>& comps_of(const Constraint& c) {
  if (const auto* t = std::get_if<Dtgd>(&c)) return t->comps;
  return std::get<Degd>(c).comps;
}

namespace {

void collect_constants(const std::vector<Atom>& atoms,
                       const std::vector<CompAtom>& comps,
                       std::set<Value>& out) {
  for (const Atom& a : atoms)
    for (const Term& t : a.rel.args)
      if (!t.is_var()) out.insert(*t.con);
  for (const CompAtom& c : comps) {
    if (!c.lhs.is_var()) out.insert(*c.lhs.con);
    if (!c.rhs.is_var()) out.insert(*c.rhs.con);
  }
}

}  // namespace

std::set<Value> constants_of(const Constraint& c) {
  std::set<Value> out;
  if (const auto* t = std::get_if<Dtgd>(&c)) {
    collect_constants(t->body, t->comps, out);
    collect_constants(t->head, {}, out);
  } else {
    const Degd& e = std::get<Degd>(c);
    collect_constants(e.body, e.comps, out);
  }
  return out;
}

std::set<Value> constants_of(const ConstraintSet& cs) {
  std::set<Value> out;
  for (const Constraint& c : cs.items) {
    auto cc = constants_of(c);
    out.insert(cc.begin(), cc.end());
  }
  return out;
}

Schema schema_of(const DistributedInstance& d) {
  Schema s;
  for (const Fact& f : d.global) {
    auto [it, fresh] = s.emplace(f.rel, f.args.size());
    if (!fresh && it->second != f.args.size())
      throw Error(ErrorCode::ArityMismatch,
                  "relation " + f.rel + " used with arities " +
                      std::to_string(it->second) + " and " +
                      std::to_string(f.args.size()));
  }
  return s;
}

Schema merge_schemas(Schema a, const Schema& b) {
  for (const auto& [rel, arity] : b) {
    auto [it, fresh] = a.emplace(rel, arity);
    if (!fresh && it->second != arity)
      throw Error(ErrorCode::ArityMismatch,
                  "relation " + rel + " used with arities " +
                      std::to_string(it->second) + " and " +
                      std::to_string(arity));
  }
  return a;
}

}  // namespace distcheck
