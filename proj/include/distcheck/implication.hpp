#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "distcheck/ast.hpp"
#include "distcheck/chase.hpp"

namespace distcheck {

/// The value pool dom(Sigma, tau, D): the constants of Sigma and tau,
/// padding values below the smallest and above the largest constant,
/// and intermediate values between successive constants, as permitted
/// by the domain. With no constants at all: {0, ..., m-1} for m data
/// variables in body(tau) (at least one value).
std::vector<Value> build_domain(const ConstraintSet& sigma,
                                const Constraint& tau, Domain domain);

struct CanonicalDb {
  Valuation v;
  DistributedInstance db;
};

/// All canonical start instances V(rbody(tau)): data variables range
/// over build_domain, filtered to valuations satisfying the comparison
/// atoms of body(tau); node variables map one-one onto 0..k-1 in first
/// occurrence order. Deterministic order.
std::vector<CanonicalDb> canonical_instances(const ConstraintSet& sigma,
                                             const Constraint& tau,
                                             Domain domain);

/// Looks for an extension of v over the head-only variables of tau
/// that satisfies head(tau) on d; v is resolved through the chase
/// state's node and value merges first. For a degd tau this degenerates
/// to the head equality test.
std::optional<Valuation> head_extension_exists(const Valuation& v,
                                               const Constraint& tau,
                                               const ChaseState& state);

struct ImplicationStats {
  std::uint64_t canonical_dbs = 0;
  std::uint64_t chase_steps = 0;
  bool single_db_mode = false;
};

struct ImplicationVerdict {
  bool holds = true;
  std::optional<DistributedInstance> countermodel;
  std::optional<Valuation> witness;
  ImplicationStats stats;
};

struct ImplicationOptions {
  Domain domain = Domain::Rat;
  unsigned jobs = 1;
  DegdNodeSemantics degd_nodes = DegdNodeSemantics::Merge;
};

/// Decides Sigma |= tau over the chosen domain by chasing every
/// canonical instance; with no comparison atoms anywhere, a single
/// one-one canonical instance with the identifying chase suffices.
/// Every refutation is re-verified: the countermodel satisfies Sigma
/// and violates tau under the witness. Throws FragmentError if Sigma
/// is not data-full.
ImplicationVerdict decide_implication(const ConstraintSet& sigma,
                                      const Constraint& tau,
                                      const ImplicationOptions& opts = {});

}  // namespace distcheck
