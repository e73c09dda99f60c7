#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "distcheck/ast.hpp"
#include "distcheck/error.hpp"

namespace distcheck {

/// All valuations satisfying the given body on D: bare atoms match
/// global facts, distributed atoms match local facts, comparisons
/// filter. Result is duplicate-free and sorted (lexicographic in
/// variable name, then value / node id).
std::vector<Valuation> find_valuations(const std::vector<Atom>& atoms,
                                       const std::vector<CompAtom>& comps,
                                       const DistributedInstance& d,
                                       const Schema& schema);

/// Extends `base` over the head-only variables of `head` so that every
/// head atom holds in D; returns the first extension in deterministic
/// order, or nullopt.
std::optional<Valuation> extend_to_head(const Valuation& base,
                                        const std::vector<Atom>& head,
                                        const DistributedInstance& d);

bool satisfies(const DistributedInstance& d, const Constraint& c,
               const Schema& schema);
bool satisfies(const DistributedInstance& d, const Constraint& c);

struct Violation {
  std::size_t constraint;  // index into the constraint set
  Valuation witness;
};

/// Empty result iff d satisfies every constraint; otherwise one
/// witnessing valuation per violated constraint.
std::vector<Violation> model_check(const DistributedInstance& d,
                                   const ConstraintSet& cs);

/// True iff every head data variable occurs in the relational body.
bool is_data_full(const Dtgd& s);

/// Splits a data-full dtgd into heads with at most one node variable:
/// one dtgd per bare head atom and one per head node variable (carrying
/// all of that variable's atoms), in order of first occurrence in the
/// original head. Bodies are copied verbatim.
std::vector<Dtgd> normalize_heads(const Dtgd& s);

}  // namespace distcheck
