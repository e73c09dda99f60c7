#pragma once

#include <string>
#include <utility>
#include <vector>

#include "distcheck/ast.hpp"

namespace distcheck {

/// One dtgd R(x1,...,xr) -> R(x1,...,xr)@k per relation: every global
/// fact must live at some node.
ConstraintSet gen_non_skipping(const Schema& schema);

/// Existence rule plus the co-location rule placing all facts that
/// agree on the key positions (1-based) at a common node.
ConstraintSet gen_hash_partition(const std::string& rel, unsigned arity,
                                 const std::vector<unsigned>& keys);

/// Derived horizontal fragmentation: existence rules for the range
/// relation (binary: lower, upper) and the partitioned relation, plus
/// the rule shipping each fact to every node whose range brackets the
/// key attribute.
ConstraintSet gen_range_partition(const std::string& rel, unsigned arity,
                                  unsigned key, const std::string& range_rel);

/// Reference co-partitioning along a chain: the root is
/// hash-partitioned, every other relation follows its predecessor via
/// the given (predecessor position, own position) join pairs.
struct CoPartitionSpec {
  struct Link {
    std::string rel;
    unsigned arity = 0;
    std::vector<std::pair<unsigned, unsigned>> join;  // (parent pos, own pos)
  };
  std::string root_rel;
  unsigned root_arity = 0;
  std::vector<unsigned> root_keys;
  std::vector<Link> chain;
};

ConstraintSet gen_copartition(const CoPartitionSpec& spec);

/// Abstract 2-dimensional hypercube distribution for a query: Dom
/// population rules for every relation position, the node-generating
/// rule Dom(x1), Dom(x2) -> H(x1,x2)@k, and one collecting rule per
/// body atom whose positions map onto the dimensions; unmapped
/// dimensions are padded with Dom-bound variables.
struct HypercubeSpec {
  Query q;
  unsigned dims = 2;
  // dims_of[i] lists (1-based atom position, dimension) for q.body[i].
  std::vector<std::vector<std::pair<unsigned, unsigned>>> dims_of;
};

ConstraintSet gen_hypercube(const HypercubeSpec& spec);

/// Equality up to a bijective renaming of data and node variables;
/// atom and comparison order is immaterial, constants must coincide.
bool alpha_equivalent(const Constraint& a, const Constraint& b);

/// Pairwise alpha-equivalence in declaration order.
bool alpha_equivalent(const ConstraintSet& a, const ConstraintSet& b);

}  // namespace distcheck
