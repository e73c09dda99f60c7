#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "distcheck/ast.hpp"

namespace distcheck {

/// Strict is the plain chase; Identify additionally merges data
/// values on value-identifying degds, failing only when two distinct
/// protected constants are forced equal.
enum class ChaseMode { Strict, Identify };

/// What a node-identifying degd does with two distinct nodes: merge
/// them (default), or fail the sequence.
enum class DegdNodeSemantics { Merge, Fail };

struct ChaseState {
  DistributedInstance inst;
  NodeId next_fresh = 0;
  // Merged ids point to their survivor; ids are never reused.
  std::map<NodeId, NodeId> node_repr;
  std::map<Value, Value> value_repr;
  std::uint64_t steps = 0;

  NodeId find(NodeId k) const;
  Value resolve(const Value& v) const;
};

ChaseState make_state(const DistributedInstance& d);

/// Next unused node id: one past the largest id ever seen.
NodeId fresh_node(const ChaseState& s);

/// W satisfies the body, no head-extension of W already holds, and for
/// node-creating dtgds W maps the head variable to fresh_node(s).
bool applicable(const Dtgd& s, const Valuation& w, const ChaseState& state);

struct ChaseStep {
  std::size_t constraint = 0;  // index into the original constraint set
  Valuation val;
  std::vector<std::pair<std::optional<NodeId>, Fact>> produced;
  std::optional<std::pair<NodeId, NodeId>> node_merge;    // (kept, dropped)
  std::optional<std::pair<Value, Value>> value_merge;     // (kept, dropped)
};

/// Pre: applicable(s, w, state); throws NotApplicable otherwise.
ChaseState apply_step(const Dtgd& s, const Valuation& w, ChaseState state);

enum class ChaseOutcome { Success, Failed };

struct ChaseTrace {
  DistributedInstance initial;
  std::vector<ChaseStep> steps;
  ChaseOutcome outcome = ChaseOutcome::Success;
  std::optional<std::size_t> failed_constraint;
  std::optional<Valuation> failure_witness;
  ChaseState state;  // final state
};

struct ChaseOptions {
  ChaseMode mode = ChaseMode::Strict;
  DegdNodeSemantics degd_nodes = DegdNodeSemantics::Merge;
  // Constants that must never be identified with each other
  // (Identify mode).
  std::set<Value> protected_constants;
  // Hard step budget; computed from the input when absent. The
  // environment variable DISTCHECK_STEP_BUDGET overrides both.
  std::optional<std::uint64_t> budget;
};

/// Runs a maximal chase sequence under deterministic scheduling:
/// constraints in declaration order, valuations in lexicographic
/// order, first applicable step wins, scan restarts after each step.
/// Dtgds are head-normalized internally; throws NotDataFull.
ChaseTrace run_chase(const DistributedInstance& d, const ConstraintSet& sigma,
                     const ChaseOptions& opts = {});

/// Re-executes the steps of a trace from its initial instance.
DistributedInstance replay(const ChaseTrace& trace);

}  // namespace distcheck
