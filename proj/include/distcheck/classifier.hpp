#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "distcheck/ast.hpp"

namespace distcheck {

enum class Kind {
  NodeCreating,
  DataCollecting,
  GlobalDtgd,
  NodeIdentifying,
  ValueIdentifying,
};

/// Shape of a constraint with respect to where its atoms live.
enum class Form {
  Mixed,        // none of the named shapes
  Global,       // no distributed atom at all
  Local,        // every atom distributed, all at one node variable
  GlobalLocal,  // bare body, distributed single-node head
  LocalGlobal,  // distributed single-node body, bare head
};

struct KindTag {
  Kind kind = Kind::GlobalDtgd;
  Form form = Form::Mixed;
  std::optional<std::string> head_var;  // set for generating/collecting dtgds
};

enum class TypeCode { G1, G2, G3, G4, C1, C2, C3, E1, E2, E3, E4 };

struct TypeTags {
  std::set<TypeCode> codes;
  unsigned b = 1;
  // Head variables under which (E2) qualifies; both orientations are
  // recorded when both do.
  std::vector<std::string> e2_heads;
};

const char* kind_name(Kind k);
const char* form_name(Form f);
const char* type_code_name(TypeCode t);

/// Data variables of the atoms whose node term is `node_var`.
std::set<std::string> context(const std::string& node_var,
                              const std::vector<Atom>& atoms);

/// Context of a node variable in a whole constraint: relational body
/// plus head for dtgds, relational body only for degds.
std::set<std::string> context_of(const std::string& node_var,
                                 const Constraint& c);

/// Requires a head-normalized, data-full dtgd (at most one head node
/// variable); throws NotDataFull otherwise. Degds need no
/// normalization.
KindTag classify_kind(const Constraint& c);

TypeTags type_tags(const Constraint& c, unsigned b);

enum class ComplexityVerdict { Undecidable, Exptime, Pspace, Pi2 };

const char* verdict_name(ComplexityVerdict v);

struct ConstraintReport {
  std::size_t origin = 0;  // index into the input constraint set
  Constraint normalized;
  bool data_full = true;
  KindTag kind;
  TypeTags tags;
};

struct FragmentReport {
  std::vector<ConstraintReport> constraints;
  bool data_full = true;
  unsigned alpha = 0;  // max data arity in the schema
  // Minimal bound making every constraint qualify; nullopt when no
  // finite bound does.
  std::optional<unsigned> b_tbg;
  std::optional<unsigned> b_tbd;
  std::optional<unsigned> b_twbd;
  std::optional<unsigned> b_ebd;
  unsigned b_used = 1;  // bound the verdict and per-constraint tags use
  ComplexityVerdict verdict = ComplexityVerdict::Exptime;
  bool comparison_free = true;  // NP sub-flag on the Pi2 verdict
};

/// When `b` is given, membership is judged at that bound; otherwise at
/// the minimal finite bound of the smallest qualifying fragment.
FragmentReport fragment_report(const ConstraintSet& cs,
                               std::optional<unsigned> b = std::nullopt);

std::string render(const FragmentReport& r);

}  // namespace distcheck
