#include "distcheck/core.hpp"

#include <algorithm>

namespace distcheck {

namespace {

bool comp_holds(const CompAtom& c, const Valuation& v) {
  Value l = v(c.lhs);
  Value r = v(c.rhs);
  return c.op == CompOp::Lt ? l < r : l <= r;
}

bool comp_bound(const CompAtom& c, const Valuation& v) {
  return (!c.lhs.is_var() || v.data.count(c.lhs.var)) &&
         (!c.rhs.is_var() || v.data.count(c.rhs.var));
}

/// Tries to extend `v` so that the fact matches the atom's relational
/// part; records newly bound variables in `bound` for backtracking.
bool unify(const RelAtom& a, const Fact& f, Valuation& v,
           std::vector<std::string>& bound) {
  if (a.rel != f.rel || a.args.size() != f.args.size()) return false;
  std::size_t n0 = bound.size();
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    const Term& t = a.args[i];
    if (!t.is_var()) {
      if (*t.con != f.args[i]) goto fail;
      continue;
    }
    if (auto it = v.data.find(t.var); it != v.data.end()) {
      if (it->second != f.args[i]) goto fail;
    } else {
      v.data.emplace(t.var, f.args[i]);
      bound.push_back(t.var);
    }
  }
  return true;
fail:
  while (bound.size() > n0) {
    v.data.erase(bound.back());
    bound.pop_back();
  }
  return false;
}

struct Matcher {
  const std::vector<Atom>& atoms;
  const std::vector<CompAtom>& comps;
  const DistributedInstance& d;
  std::size_t limit;
  std::vector<Valuation> out;

  void search(std::size_t i, Valuation& v) {
    if (out.size() >= limit) return;
    if (i == atoms.size()) {
      for (const CompAtom& c : comps)
        if (!comp_holds(c, v)) return;
      out.push_back(v);
      return;
    }
    const Atom& a = atoms[i];
    // Early comparison pruning once both sides are bound.
    for (const CompAtom& c : comps)
      if (comp_bound(c, v) && !comp_holds(c, v)) return;
    if (!a.distributed()) {
      for (const Fact& f : d.global) try_fact(i, a, f, v, {});
      return;
    }
    const NodeTerm& nt = *a.at;
    if (!nt.is_var()) {
      match_at(i, a, *nt.id, v);
      return;
    }
    if (auto it = v.node.find(nt.var); it != v.node.end()) {
      match_at(i, a, it->second, v);
      return;
    }
    for (const auto& [k, _] : d.local) {
      v.node.emplace(nt.var, k);
      match_at(i, a, k, v);
      v.node.erase(nt.var);
      if (out.size() >= limit) return;
    }
  }

  void match_at(std::size_t i, const Atom& a, NodeId k, Valuation& v) {
    auto it = d.local.find(k);
    if (it == d.local.end()) return;
    for (const Fact& f : it->second) {
      try_fact(i, a, f, v, {});
      if (out.size() >= limit) return;
    }
  }

  void try_fact(std::size_t i, const Atom& a, const Fact& f, Valuation& v,
                std::vector<std::string> bound) {
    if (!unify(a.rel, f, v, bound)) return;
    search(i + 1, v);
    for (const std::string& x : bound) v.data.erase(x);
  }
};

std::vector<Valuation> match(const std::vector<Atom>& atoms,
                             const std::vector<CompAtom>& comps,
                             const DistributedInstance& d, Valuation seed,
                             std::size_t limit) {
  Matcher m{atoms, comps, d, limit, {}};
  m.search(0, seed);
  std::sort(m.out.begin(), m.out.end());
  m.out.erase(std::unique(m.out.begin(), m.out.end()), m.out.end());
  return m.out;
}

}  // namespace

std::vector<Valuation> find_valuations(const std::vector<Atom>& atoms,
                                       const std::vector<CompAtom>& comps,
                                       const DistributedInstance& d,
                                       const Schema& schema) {
  for (const Atom& a : atoms) {
    auto it = schema.find(a.rel.rel);
    if (it != schema.end() && it->second != a.rel.args.size())
      throw Error(ErrorCode::ArityMismatch,
                  "relation " + a.rel.rel + " used with arities " +
                      std::to_string(it->second) + " and " +
                      std::to_string(a.rel.args.size()));
  }
  return match(atoms, comps, d, {}, static_cast<std::size_t>(-1));
}

std::optional<Valuation> extend_to_head(const Valuation& base,
                                        const std::vector<Atom>& head,
                                        const DistributedInstance& d) {
  auto exts = match(head, {}, d, base, 1);
  if (exts.empty()) return std::nullopt;
  return exts.front();
}

bool satisfies(const DistributedInstance& d, const Constraint& c,
               const Schema& schema) {
  if (const auto* t = std::get_if<Dtgd>(&c)) {
    for (const Valuation& v : find_valuations(t->body, t->comps, d, schema))
      if (!extend_to_head(v, t->head, d)) return false;
    return true;
  }
  const Degd& e = std::get<Degd>(c);
  for (const Valuation& v : find_valuations(e.body, e.comps, d, schema)) {
    if (e.sort == EqSort::Data) {
      if (v.data.at(e.lhs) != v.data.at(e.rhs)) return false;
    } else {
      if (v.node.at(e.lhs) != v.node.at(e.rhs)) return false;
    }
  }
  return true;
}

bool satisfies(const DistributedInstance& d, const Constraint& c) {
  return satisfies(d, c, schema_of(d));
}

std::vector<Violation> model_check(const DistributedInstance& d,
                                   const ConstraintSet& cs) {
  std::vector<Violation> out;
  Schema schema = merge_schemas(cs.schema, schema_of(d));
  for (std::size_t i = 0; i < cs.items.size(); ++i) {
    const Constraint& c = cs.items[i];
    if (const auto* t = std::get_if<Dtgd>(&c)) {
      for (const Valuation& v : find_valuations(t->body, t->comps, d, schema))
        if (!extend_to_head(v, t->head, d)) {
          out.push_back({i, v});
          break;
        }
    } else {
      const Degd& e = std::get<Degd>(c);
      for (const Valuation& v : find_valuations(e.body, e.comps, d, schema)) {
        bool ok = e.sort == EqSort::Data ? v.data.at(e.lhs) == v.data.at(e.rhs)
                                         : v.node.at(e.lhs) == v.node.at(e.rhs);
        if (!ok) {
          out.push_back({i, v});
          break;
        }
      }
    }
  }
  return out;
}

bool is_data_full(const Dtgd& s) {
  auto body = data_vars(s.body);
  for (const std::string& x : data_vars(s.head))
    if (!body.count(x)) return false;
  return true;
}

std::vector<Dtgd> normalize_heads(const Dtgd& s) {
  std::vector<Dtgd> out;
  std::set<std::string> seen;
  for (const Atom& a : s.head) {
    if (!a.distributed()) {
      out.push_back({s.body, s.comps, {a}});
      continue;
    }
    const std::string& k = a.at->var;
    if (seen.count(k)) continue;
    seen.insert(k);
    Dtgd part{s.body, s.comps, {}};
    for (const Atom& b : s.head)
      if (b.distributed() && b.at->var == k) part.head.push_back(b);
    out.push_back(std::move(part));
  }
  return out;
}

}  // namespace distcheck
