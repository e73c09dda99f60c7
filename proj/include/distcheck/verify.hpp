#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distcheck/ast.hpp"
#include "distcheck/pc.hpp"

namespace distcheck {

/// Exhaustively enumerates distributed instances whose global facts
/// range over `values` (at most max_facts of them) and whose locals
/// use at most max_nodes nodes, up to node renaming. Returns the
/// first instance satisfying sigma but violating tau, else nullopt.
/// Sound for refutation only: nullopt does not certify implication.
/// Throws BudgetExceeded after `cap` examined instances.
std::optional<DistributedInstance> brute_force_refute(
    const ConstraintSet& sigma, const Constraint& tau,
    const std::vector<Value>& values, unsigned max_nodes,
    std::size_t max_facts, std::uint64_t cap = 50'000'000);

/// Certain answers by enumerating every distribution of the fixed
/// global instance onto at most max_nodes nodes (up to node renaming)
/// and intersecting the naive results of the sigma-satisfying ones.
CertainResult certain_oracle(const Query& q, const FactSet& instance,
                             const ConstraintSet& sigma, unsigned max_nodes,
                             std::uint64_t cap = 50'000'000);

struct AtmTransition {
  unsigned state = 0;
  unsigned write = 0;  // alphabet index
  bool right = false;
};

/// An alternating Turing machine with end-marked tape. The first and
/// last alphabet characters are the markers; they are never rewritten,
/// and the head bounces off them (forced move right on the left
/// marker, left on the right marker).
struct Atm {
  unsigned states = 0;
  unsigned initial = 0;
  std::vector<bool> accepting;
  std::vector<bool> universal;
  std::string alphabet;
  // delta[j] maps (state, read symbol index) to a transition.
  std::array<std::map<std::pair<unsigned, unsigned>, AtmTransition>, 2> delta;
};

/// Structural checks: both transition relations total, initial state
/// non-accepting, marker conventions respected, markers never written
/// onto inner cells. Throws SyntaxError on violation.
void validate_atm(const Atm& m);

/// Line-based format:
///   states N / initial Q / accepting Q... / universal Q...
///   alphabet STR            (first and last char are the markers)
///   delta J Q A Q' A' M     (J in 1..2, M in {L,R})
Atm parse_atm(const std::string& text, const std::string& file = "");

/// Exact acceptance over the |Q| * (n+2) * t^n configuration space:
/// accepting states seed the fixpoint, universal states need both
/// successors, existential states one. Throws StateSpaceCap if the
/// space exceeds `cap` configurations.
bool simulate_atm(const Atm& m, const std::string& word,
                  std::uint64_t cap = 1u << 24);

/// The implication instance whose positive answer coincides with
/// acceptance of the word: per-configuration node generators, per-
/// transition collecting rules, and the acceptance rules; the
/// conclusion asks for Acc at the initial configuration's node.
std::pair<ConstraintSet, Constraint> gen_atm_instance(
    const Atm& m, const std::string& word);

}  // namespace distcheck
