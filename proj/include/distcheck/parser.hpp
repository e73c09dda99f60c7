#pragma once

#include <string>

#include "distcheck/ast.hpp"

namespace distcheck {

/// Parses a `.dc` constraint file: `.`-terminated statements of the
/// form `body -> head`, where the body mixes relation atoms (optionally
/// `@node`) and comparisons, and the head is either an atom list (dtgd)
/// or a single equality `x = y` (degd). The schema is inferred from
/// first use. `file` only labels error spans.
ConstraintSet parse_constraints(const std::string& text,
                                const std::string& file = "");

/// Parses a `.dinst` instance file: `global { fact* } local ID { fact* }*`.
/// Facts listed only locally are added to the global instance, unless
/// `strict`, which raises SubsetViolation instead.
DistributedInstance parse_instance(const std::string& text,
                                   const std::string& file = "",
                                   bool strict = false);

/// Parses a `.cq` query file: `H(x,...) <- R(...), ... .`
Query parse_query(const std::string& text, const std::string& file = "");

/// Canonical text renderings; parse(render(x)) is structurally
/// identical to x. Constraints keep their order, instance facts are
/// emitted sorted.
std::string render(const ConstraintSet& cs);
std::string render(const DistributedInstance& d);
std::string render(const Query& q);
std::string render(const Fact& f);

}  // namespace distcheck
