#pragma once

#include "distcheck/ast.hpp"
#include "distcheck/implication.hpp"

namespace distcheck {

/// {V(head(Q)) : V satisfies body(Q) on facts}.
FactSet eval_cq(const Query& q, const FactSet& facts);

/// Union of eval_cq over the local instances of d.
FactSet naive_eval(const Query& q, const DistributedInstance& d);

struct PcCheck {
  bool correct = true;
  FactSet missing;  // results over global(d) derived at no node
};

PcCheck pc_on_instance(const Query& q, const DistributedInstance& d);

/// The dtgd expressing parallel-correctness of q: body(q) implies the
/// body with every non-head variable renamed fresh, placed at a fresh
/// node. Generally not data-full.
Dtgd encode_pc(const Query& q);

/// The dtgd expressing strong parallel-correctness: body(q) implies
/// body(q) at a fresh node. Always data-full.
Dtgd encode_strong_pc(const Query& q);

/// Parallel-correctness of q w.r.t. sigma, as implication of the
/// (strong) PC dtgd.
ImplicationVerdict pc_wrt_constraints(const Query& q,
                                      const ConstraintSet& sigma, bool strong,
                                      const ImplicationOptions& opts = {});

struct CertainResult {
  bool inconsistent = false;  // no distribution of the instance satisfies sigma
  FactSet facts;
};

/// Intersection of naive_eval(q, D) over all D with global(D) = instance
/// and D satisfying sigma. Throws ConsistencyError if sigma contains a
/// global dtgd that would have to extend the fixed global instance.
CertainResult certain_answers(const Query& q, const FactSet& instance,
                              const ConstraintSet& sigma,
                              Domain domain = Domain::Rat);

}  // namespace distcheck
