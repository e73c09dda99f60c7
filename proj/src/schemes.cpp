#include "distcheck/schemes.hpp"

#include <algorithm>

#include "distcheck/error.hpp"

namespace distcheck {

namespace {

std::string xvar(unsigned i) { return "x" + std::to_string(i); }

RelAtom rel_atom(const std::string& rel, unsigned first, unsigned arity) {
  RelAtom a{rel, {}};
  for (unsigned i = 0; i < arity; ++i)
    a.args.push_back(Term::variable(xvar(first + i)));
  return a;
}

Atom at(RelAtom a, const std::string& node) {
  return {std::move(a), NodeTerm::variable(node)};
}

Atom bare(RelAtom a) { return {std::move(a), {}}; }

void check_keys(const std::vector<unsigned>& keys, unsigned arity) {
  if (keys.empty())
    throw Error(ErrorCode::Usage, "at least one key position is required");
  for (unsigned k : keys)
    if (k < 1 || k > arity)
      throw Error(ErrorCode::Usage,
                  "key position " + std::to_string(k) +
                      " out of range for arity " + std::to_string(arity));
}

/// Existence rule R(x1,...,xar) -> R(x1,...,xar)@k.
Dtgd existence(const std::string& rel, unsigned arity) {
  RelAtom a = rel_atom(rel, 1, arity);
  return {{bare(a)}, {}, {at(a, "k")}};
}

/// Co-location rule: facts agreeing on the key positions share a node.
Dtgd co_location(const std::string& rel, unsigned arity,
                 const std::vector<unsigned>& keys) {
  RelAtom pinned = rel_atom(rel, 1, arity);
  RelAtom other{rel, {}};
  unsigned next = arity + 1;
  for (unsigned i = 1; i <= arity; ++i) {
    bool key = std::find(keys.begin(), keys.end(), i) != keys.end();
    other.args.push_back(key ? pinned.args[i - 1]
                             : Term::variable(xvar(next++)));
  }
  return {{at(pinned, "k"), bare(other)}, {}, {at(other, "k")}};
}

}  // namespace

ConstraintSet gen_non_skipping(const Schema& schema) {
  ConstraintSet out;
  out.schema = schema;
  for (const auto& [rel, arity] : schema)
    out.items.push_back(existence(rel, arity));
  return out;
}

ConstraintSet gen_hash_partition(const std::string& rel, unsigned arity,
                                 const std::vector<unsigned>& keys) {
  check_keys(keys, arity);
  ConstraintSet out;
  out.schema[rel] = arity;
  out.items.push_back(existence(rel, arity));
  out.items.push_back(co_location(rel, arity, keys));
  return out;
}

ConstraintSet gen_range_partition(const std::string& rel, unsigned arity,
                                  unsigned key, const std::string& range_rel) {
  check_keys({key}, arity);
  if (range_rel == rel)
    throw Error(ErrorCode::Usage,
                "range relation must differ from the partitioned relation");
  ConstraintSet out;
  out.schema[rel] = arity;
  out.schema[range_rel] = 2;
  out.items.push_back(existence(range_rel, 2));
  out.items.push_back(existence(rel, arity));

  RelAtom fact = rel_atom(rel, 1, arity);
  RelAtom range = rel_atom(range_rel, arity + 1, 2);
  Dtgd ship;
  ship.body = {at(fact, "k"), at(range, "k'")};
  ship.comps = {{range.args[0], CompOp::Le, fact.args[key - 1]},
                {fact.args[key - 1], CompOp::Le, range.args[1]}};
  ship.head = {at(fact, "k'")};
  out.items.push_back(std::move(ship));
  return out;
}

ConstraintSet gen_copartition(const CoPartitionSpec& spec) {
  check_keys(spec.root_keys, spec.root_arity);
  ConstraintSet out;
  out.schema[spec.root_rel] = spec.root_arity;
  out.items.push_back(existence(spec.root_rel, spec.root_arity));
  for (const auto& link : spec.chain) {
    if (auto it = out.schema.find(link.rel);
        it != out.schema.end() && it->second != link.arity)
      throw Error(ErrorCode::ArityMismatch,
                  "relation " + link.rel + " used with two arities");
    out.schema[link.rel] = link.arity;
    out.items.push_back(existence(link.rel, link.arity));
  }
  out.items.push_back(
      co_location(spec.root_rel, spec.root_arity, spec.root_keys));

  std::string parent_rel = spec.root_rel;
  unsigned parent_arity = spec.root_arity;
  for (const auto& link : spec.chain) {
    if (link.join.empty())
      throw Error(ErrorCode::Usage,
                  "chain relation " + link.rel + " has no join positions");
    RelAtom parent = rel_atom(parent_rel, 1, parent_arity);
    RelAtom child{link.rel, std::vector<Term>(link.arity, Term{})};
    for (auto [pp, cp] : link.join) {
      if (pp < 1 || pp > parent_arity || cp < 1 || cp > link.arity)
        throw Error(ErrorCode::Usage,
                    "join position out of range for " + link.rel);
      child.args[cp - 1] = parent.args[pp - 1];
    }
    unsigned next = parent_arity + 1;
    for (Term& t : child.args)
      if (t.is_var() && t.var.empty()) t = Term::variable(xvar(next++));
    out.items.push_back(Dtgd{{at(parent, "k"), bare(child)},
                             {},
                             {at(child, "k")}});
    parent_rel = link.rel;
    parent_arity = link.arity;
  }
  return out;
}

ConstraintSet gen_hypercube(const HypercubeSpec& spec) {
  if (spec.dims != 2)
    throw Error(ErrorCode::UnsupportedDimension,
                "only 2-dimensional hypercube distributions are supported");
  if (spec.dims_of.size() != spec.q.body.size())
    throw Error(ErrorCode::Usage,
                "one dimension mapping per query atom is required");

  ConstraintSet out;
  std::vector<std::pair<std::string, unsigned>> rels;
  std::set<std::string> used_vars;
  for (const RelAtom& a : spec.q.body) {
    if (a.rel == "Dom" || a.rel == "H")
      throw Error(ErrorCode::Usage,
                  "query bodies may not use the reserved relations Dom, H");
    unsigned arity = static_cast<unsigned>(a.args.size());
    if (auto it = out.schema.find(a.rel); it == out.schema.end())
      rels.emplace_back(a.rel, arity);
    else if (it->second != arity)
      throw Error(ErrorCode::ArityMismatch,
                  "relation " + a.rel + " used with two arities");
    out.schema[a.rel] = arity;
    for (const Term& t : a.args)
      if (t.is_var()) used_vars.insert(t.var);
  }
  out.schema["Dom"] = 1;
  out.schema["H"] = spec.dims;

  std::vector<bool> dim_used(spec.dims, false);
  for (std::size_t i = 0; i < spec.q.body.size(); ++i) {
    std::set<unsigned> seen_dims;
    for (auto [pos, dim] : spec.dims_of[i]) {
      if (pos < 1 || pos > spec.q.body[i].args.size() || dim < 1 ||
          dim > spec.dims || !seen_dims.insert(dim).second)
        throw Error(ErrorCode::Usage, "invalid dimension mapping for atom " +
                                          std::to_string(i + 1));
      if (!spec.q.body[i].args[pos - 1].is_var())
        throw Error(ErrorCode::Usage,
                    "hashed positions must carry variables");
      dim_used[dim - 1] = true;
    }
  }
  for (unsigned d = 0; d < spec.dims; ++d)
    if (!dim_used[d])
      throw Error(ErrorCode::Usage,
                  "dimension " + std::to_string(d + 1) + " is used by no atom");

  for (const auto& [rel, arity] : rels) {
    RelAtom a = rel_atom(rel, 1, arity);
    for (unsigned j = 0; j < arity; ++j)
      out.items.push_back(Dtgd{{bare(a)}, {}, {bare({"Dom", {a.args[j]}})}});
  }
  {
    RelAtom h = rel_atom("H", 1, spec.dims);
    std::vector<Atom> body;
    for (const Term& t : h.args) body.push_back(bare({"Dom", {t}}));
    out.items.push_back(Dtgd{std::move(body), {}, {at(h, "k")}});
  }

  auto fresh = [&used_vars](std::string base) {
    while (used_vars.count(base)) base += "'";
    return base;
  };
  std::string node = fresh("k");
  for (std::size_t i = 0; i < spec.q.body.size(); ++i) {
    const RelAtom& a = spec.q.body[i];
    std::vector<Term> haddr(spec.dims, Term{});
    for (auto [pos, dim] : spec.dims_of[i]) haddr[dim - 1] = a.args[pos - 1];
    Dtgd rule;
    rule.body.push_back(bare(a));
    unsigned pad = 1;
    for (Term& t : haddr)
      if (t.is_var() && t.var.empty()) {
        t = Term::variable(fresh("z" + std::to_string(pad++)));
        rule.body.push_back(bare({"Dom", {t}}));
      }
    rule.body.push_back(at({"H", std::move(haddr)}, node));
    rule.head.push_back(at(a, node));
    out.items.push_back(std::move(rule));
  }
  return out;
}

namespace {

/// A partial variable bijection built up during matching.
struct Renaming {
  std::map<std::string, std::string> fwd, bwd;

  bool bind(const std::string& a, const std::string& b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f == fwd.end() && g == bwd.end()) {
      fwd.emplace(a, b);
      bwd.emplace(b, a);
      return true;
    }
    return f != fwd.end() && f->second == b && g != bwd.end() &&
           g->second == a;
  }
};

struct AlphaState {
  Renaming data, node;

  bool term(const Term& a, const Term& b) {
    if (a.is_var() != b.is_var()) return false;
    if (!a.is_var()) return *a.con == *b.con;
    return data.bind(a.var, b.var);
  }

  bool rel_atom(const RelAtom& a, const RelAtom& b) {
    if (a.rel != b.rel || a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!term(a.args[i], b.args[i])) return false;
    return true;
  }

  bool atom(const Atom& a, const Atom& b) {
    if (a.at.has_value() != b.at.has_value()) return false;
    if (!rel_atom(a.rel, b.rel)) return false;
    if (!a.at) return true;
    if (a.at->is_var() != b.at->is_var()) return false;
    if (!a.at->is_var()) return *a.at->id == *b.at->id;
    return node.bind(a.at->var, b.at->var);
  }

  bool comp(const CompAtom& a, const CompAtom& b) {
    return a.op == b.op && term(a.lhs, b.lhs) && term(a.rhs, b.rhs);
  }
};

/// Matches two multisets under the shared renaming, trying every
/// pairing; calls rest() once both are exhausted.
template <typename T, typename Match, typename Rest>
bool match_multiset(const std::vector<T>& as, const std::vector<T>& bs,
                    std::vector<bool>& used, std::size_t i, AlphaState& st,
                    const Match& match, const Rest& rest) {
  if (as.size() != bs.size()) return false;
  if (i == as.size()) return rest();
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (used[j]) continue;
    AlphaState saved = st;
    if (match(as[i], bs[j])) {
      used[j] = true;
      if (match_multiset(as, bs, used, i + 1, st, match, rest)) return true;
      used[j] = false;
    }
    st = saved;
  }
  return false;
}

template <typename T, typename Match, typename Rest>
bool match_multiset(const std::vector<T>& as, const std::vector<T>& bs,
                    AlphaState& st, const Match& match, const Rest& rest) {
  std::vector<bool> used(bs.size(), false);
  return match_multiset(as, bs, used, 0, st, match, rest);
}

bool alpha_dtgd(const Dtgd& a, const Dtgd& b) {
  AlphaState st;
  auto atoms = [&st](const Atom& x, const Atom& y) { return st.atom(x, y); };
  auto comps = [&st](const CompAtom& x, const CompAtom& y) {
    return st.comp(x, y);
  };
  return match_multiset(a.body, b.body, st, atoms, [&]() {
    return match_multiset(a.comps, b.comps, st, comps, [&]() {
      return match_multiset(a.head, b.head, st, atoms, []() { return true; });
    });
  });
}

bool alpha_degd(const Degd& a, const Degd& b) {
  if (a.sort != b.sort) return false;
  AlphaState st;
  auto atoms = [&st](const Atom& x, const Atom& y) { return st.atom(x, y); };
  auto comps = [&st](const CompAtom& x, const CompAtom& y) {
    return st.comp(x, y);
  };
  return match_multiset(a.body, b.body, st, atoms, [&]() {
    return match_multiset(a.comps, b.comps, st, comps, [&]() {
      Renaming& r = a.sort == EqSort::Data ? st.data : st.node;
      Renaming saved = r;
      if (r.bind(a.lhs, b.lhs) && r.bind(a.rhs, b.rhs)) return true;
      r = saved;
      return r.bind(a.lhs, b.rhs) && r.bind(a.rhs, b.lhs);
    });
  });
}

}  // namespace

bool alpha_equivalent(const Constraint& a, const Constraint& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ta = std::get_if<Dtgd>(&a))
    return alpha_dtgd(*ta, std::get<Dtgd>(b));
  return alpha_degd(std::get<Degd>(a), std::get<Degd>(b));
}

bool alpha_equivalent(const ConstraintSet& a, const ConstraintSet& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (!alpha_equivalent(a.items[i], b.items[i])) return false;
  return true;
}

}  // namespace distcheck
