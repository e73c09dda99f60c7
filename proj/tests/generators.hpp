// Deterministic random inputs shared by the unit and acceptance tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "distcheck/ast.hpp"

namespace testgen {

using namespace distcheck;

using Rng = std::mt19937;

inline unsigned pick(Rng& rng, unsigned lo, unsigned hi) {
  return std::uniform_int_distribution<unsigned>(lo, hi)(rng);
}

inline Value gen_value(Rng& rng) {
  long long num = static_cast<long long>(pick(rng, 0, 20)) - 10;
  if (pick(rng, 0, 4) == 0) return Value(num, pick(rng, 1, 5));
  return Value(num);
}

inline Schema gen_schema(Rng& rng, unsigned max_rels = 3,
                         unsigned max_arity = 3) {
  Schema s;
  unsigned n = pick(rng, 1, max_rels);
  for (unsigned i = 0; i < n; ++i)
    s["R" + std::to_string(i)] = pick(rng, 1, max_arity);
  return s;
}

struct GenOptions {
  bool data_full = false;     // force head data vars into the body
  bool comparisons = true;    // allow comparison atoms
  bool constants = true;      // allow constant terms
  bool degds = true;          // mix in degds
  unsigned max_body = 3;
  unsigned max_nodes = 2;     // node variable pool size
};

inline Term gen_term(Rng& rng, const std::vector<std::string>& vars,
                     bool constants) {
  if (constants && pick(rng, 0, 5) == 0) return Term::constant(gen_value(rng));
  return Term::variable(vars[pick(rng, 0, vars.size() - 1)]);
}

inline Constraint gen_constraint(Rng& rng, const Schema& schema,
                                 const GenOptions& opt) {
  std::vector<std::pair<std::string, unsigned>> rels(schema.begin(),
                                                     schema.end());
  std::vector<std::string> vars;
  for (unsigned i = 0; i < 4; ++i) vars.push_back("v" + std::to_string(i));
  std::vector<std::string> nodes;
  for (unsigned i = 0; i < opt.max_nodes; ++i)
    nodes.push_back("n" + std::to_string(i));

  auto gen_atom = [&](bool allow_bare) {
    const auto& [rel, arity] = rels[pick(rng, 0, rels.size() - 1)];
    Atom a{{rel, {}}, {}};
    for (unsigned i = 0; i < arity; ++i)
      a.rel.args.push_back(gen_term(rng, vars, opt.constants));
    if (!allow_bare || pick(rng, 0, 2) != 0)
      a.at = NodeTerm::variable(nodes[pick(rng, 0, nodes.size() - 1)]);
    return a;
  };

  std::vector<Atom> body;
  unsigned nbody = pick(rng, 1, opt.max_body);
  for (unsigned i = 0; i < nbody; ++i) body.push_back(gen_atom(true));

  std::set<std::string> bvars = data_vars(body);
  std::vector<std::string> bvec(bvars.begin(), bvars.end());
  std::vector<CompAtom> comps;
  if (opt.comparisons && !bvec.empty() && pick(rng, 0, 2) == 0) {
    unsigned n = pick(rng, 1, 2);
    for (unsigned i = 0; i < n; ++i) {
      Term l = Term::variable(bvec[pick(rng, 0, bvec.size() - 1)]);
      Term r = pick(rng, 0, 3) == 0
                   ? Term::constant(gen_value(rng))
                   : Term::variable(bvec[pick(rng, 0, bvec.size() - 1)]);
      comps.push_back({l, pick(rng, 0, 1) ? CompOp::Le : CompOp::Lt, r});
    }
  }

  bool make_degd = opt.degds && pick(rng, 0, 3) == 0;
  std::set<std::string> bnodes = node_vars(body);
  if (make_degd) {
    Degd e;
    e.body = body;
    e.comps = comps;
    if (bnodes.size() >= 2 && pick(rng, 0, 1)) {
      e.sort = EqSort::Node;
      auto it = bnodes.begin();
      e.lhs = *it++;
      e.rhs = *it;
      return e;
    }
    if (bvec.size() >= 1) {
      e.sort = EqSort::Data;
      e.lhs = bvec[pick(rng, 0, bvec.size() - 1)];
      e.rhs = bvec[pick(rng, 0, bvec.size() - 1)];
      return e;
    }
    // fall through to a dtgd when no data variable is available
  }

  Dtgd t;
  t.body = body;
  t.comps = comps;
  std::vector<std::string> head_vars = bvec;
  if (!opt.data_full) head_vars.push_back("w0");
  std::vector<std::string> head_nodes = {nodes.front(), "m0"};
  unsigned nhead = pick(rng, 1, 2);
  for (unsigned i = 0; i < nhead; ++i) {
    const auto& [rel, arity] = rels[pick(rng, 0, rels.size() - 1)];
    Atom a{{rel, {}}, {}};
    for (unsigned j = 0; j < arity; ++j) {
      if (!head_vars.empty() && (opt.data_full || pick(rng, 0, 1)))
        a.rel.args.push_back(
            Term::variable(head_vars[pick(rng, 0, head_vars.size() - 1)]));
      else if (!opt.data_full)
        a.rel.args.push_back(Term::variable("w0"));
      else
        a.rel.args.push_back(Term::constant(gen_value(rng)));
    }
    if (pick(rng, 0, 3) != 0) {
      std::string nv = pick(rng, 0, 1) && !bnodes.empty()
                           ? *bnodes.begin()
                           : head_nodes[pick(rng, 0, 1)];
      a.at = NodeTerm::variable(nv);
    }
    t.head.push_back(std::move(a));
  }
  return t;
}

inline ConstraintSet gen_constraint_set(Rng& rng, const GenOptions& opt = {}) {
  ConstraintSet cs;
  cs.schema = gen_schema(rng);
  unsigned n = pick(rng, 1, 3);
  for (unsigned i = 0; i < n; ++i)
    cs.items.push_back(gen_constraint(rng, cs.schema, opt));
  return cs;
}

/// Random small distributed instance over the schema with values in
/// {0, ..., max_value}.
inline DistributedInstance gen_instance(Rng& rng, const Schema& schema,
                                        unsigned max_value = 2,
                                        unsigned max_nodes = 2,
                                        unsigned max_facts = 4) {
  DistributedInstance d;
  std::vector<std::pair<std::string, unsigned>> rels(schema.begin(),
                                                     schema.end());
  unsigned n = pick(rng, 0, max_facts);
  for (unsigned i = 0; i < n; ++i) {
    const auto& [rel, arity] = rels[pick(rng, 0, rels.size() - 1)];
    Fact f{rel, {}};
    for (unsigned j = 0; j < arity; ++j)
      f.args.push_back(Value(pick(rng, 0, max_value)));
    if (pick(rng, 0, 3) == 0)
      d.add_global(std::move(f));
    else
      d.add_local(pick(rng, 0, max_nodes - 1), std::move(f));
  }
  return d;
}

}  // namespace testgen
