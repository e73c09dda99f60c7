#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "distcheck/value.hpp"

namespace distcheck {

using NodeId = unsigned;

/// A data term: either a data variable or a constant value.
struct Term {
  std::string var;            // non-empty iff the term is a variable
  std::optional<Value> con;   // set iff the term is a constant

  static Term variable(std::string name) { return Term{std::move(name), {}}; }
  static Term constant(Value v) { return Term{{}, v}; }

  bool is_var() const { return !con.has_value(); }

  auto operator<=>(const Term&) const = default;
};

/// A node term: a node variable in constraints, a concrete node id in
/// instances and chase states.
struct NodeTerm {
  std::string var;
  std::optional<NodeId> id;

  static NodeTerm variable(std::string name) {
    return NodeTerm{std::move(name), {}};
  }
  static NodeTerm node(NodeId k) { return NodeTerm{{}, k}; }

  bool is_var() const { return !id.has_value(); }

  auto operator<=>(const NodeTerm&) const = default;
};

struct RelAtom {
  std::string rel;
  std::vector<Term> args;

  auto operator<=>(const RelAtom&) const = default;
};

/// A relation atom, optionally placed at a node (`R(x,y)@k`).
/// Bare atoms refer to the global instance.
struct Atom {
  RelAtom rel;
  std::optional<NodeTerm> at;

  bool distributed() const { return at.has_value(); }

  auto operator<=>(const Atom&) const = default;
};

enum class CompOp { Lt, Le };

struct CompAtom {
  Term lhs;
  CompOp op = CompOp::Le;
  Term rhs;

  auto operator<=>(const CompAtom&) const = default;
};

struct Dtgd {
  std::vector<Atom> body;
  std::vector<CompAtom> comps;
  std::vector<Atom> head;

  auto operator<=>(const Dtgd&) const = default;
};

enum class EqSort { Data, Node };

struct Degd {
  std::vector<Atom> body;
  std::vector<CompAtom> comps;
  EqSort sort = EqSort::Data;
  std::string lhs;
  std::string rhs;

  auto operator<=>(const Degd&) const = default;
};

using Constraint = std::variant<Dtgd, Degd>;

/// Relation symbol -> arity.
using Schema = std::map<std::string, unsigned>;

struct ConstraintSet {
  Schema schema;
  std::vector<Constraint> items;

  bool operator==(const ConstraintSet&) const = default;
};

/// A ground relation atom.
struct Fact {
  std::string rel;
  std::vector<Value> args;

  auto operator<=>(const Fact&) const = default;
};

using FactSet = std::set<Fact>;

/// A global instance together with node-local instances, each local
/// set a subset of the global one. A fact is stored once; placement at
/// node k is membership in local[k].
struct DistributedInstance {
  FactSet global;
  std::map<NodeId, FactSet> local;

  bool operator==(const DistributedInstance&) const = default;

  /// Inserts into the global instance.
  void add_global(Fact f) { global.insert(std::move(f)); }
  /// Inserts at node k, also into global (keeps the subset invariant).
  void add_local(NodeId k, Fact f) {
    global.insert(f);
    local[k].insert(std::move(f));
  }

  std::set<NodeId> nodes() const;
  /// Global facts occurring at no node.
  FactSet skipped() const;
  /// All data values occurring in facts.
  std::set<Value> adom() const;

  bool empty() const { return global.empty() && local.empty(); }
};

struct Valuation {
  std::map<std::string, Value> data;
  std::map<std::string, NodeId> node;

  auto operator<=>(const Valuation&) const = default;

  Value operator()(const Term& t) const;
  NodeId operator()(const NodeTerm& t) const;
  Fact operator()(const RelAtom& a) const;
};

struct Query {
  RelAtom head;
  std::vector<RelAtom> body;

  auto operator<=>(const Query&) const = default;
};

// --- variable inventories ---

std::set<std::string> data_vars(const RelAtom& a);
std::set<std::string> data_vars(const std::vector<Atom>& atoms);
std::set<std::string> data_vars(const std::vector<CompAtom>& comps);
std::set<std::string> node_vars(const std::vector<Atom>& atoms);

std::set<std::string> body_data_vars(const Constraint& c);
const std::vector<Atom>& body_of(const Constraint& c);
const std::vector<CompAtom>& comps_of(const Constraint& c);

/// All constant values occurring in a constraint (body, comparisons, head).
std::set<Value> constants_of(const Constraint& c);
std::set<Value> constants_of(const ConstraintSet& cs);

/// Schema implied by the facts of an instance.
Schema schema_of(const DistributedInstance& d);
/// Union of two schemas; throws ArityMismatch on conflicting arities.
Schema merge_schemas(Schema a, const Schema& b);

}  // namespace distcheck
