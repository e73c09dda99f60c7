#include <doctest.h>

#include <algorithm>

#include "distcheck/core.hpp"
#include "distcheck/error.hpp"
#include "distcheck/implication.hpp"
#include "distcheck/parser.hpp"
#include "generators.hpp"

using namespace distcheck;

namespace {

Constraint one(const std::string& text) {
  return parse_constraints(text).items[0];
}

bool has(const std::vector<Value>& vs, Value v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

}  // namespace

TEST_CASE("build_domain pads and refines around the constants") {
  auto sigma = parse_constraints("R(x), 0 <= x, x <= 10 -> R(x)@k.");
  auto tau = one("R(x), R(y) -> R(x)@k.");  // m = 2

  auto rat = build_domain(sigma, tau, Domain::Rat);
  CHECK(rat == std::vector<Value>{Value(-2), Value(-1), Value(0), Value(10, 3),
                                  Value(20, 3), Value(10), Value(11),
                                  Value(12)});

  auto ints = build_domain(sigma, tau, Domain::Int);
  CHECK(ints == std::vector<Value>{Value(-2), Value(-1), Value(0), Value(1),
                                   Value(2), Value(10), Value(11), Value(12)});
}

TEST_CASE("build_domain clips at zero over the naturals") {
  auto sigma = parse_constraints("R(1) -> R(1)@k.");
  auto tau = one("R(x), R(y), R(z) -> R(x)@k.");  // m = 3
  auto nat = build_domain(sigma, tau, Domain::Nat);
  CHECK(nat == std::vector<Value>{Value(0), Value(1), Value(2), Value(3),
                                  Value(4)});
}

TEST_CASE("build_domain without constants is an initial segment") {
  ConstraintSet empty;
  auto tau = one("R(x), S(x,y) -> R(x)@k.");
  CHECK(build_domain(empty, tau, Domain::Nat) ==
        std::vector<Value>{Value(0), Value(1)});
  // never empty, even for a variable-free tau
  auto ground = one("R(1) -> R(1)@k.");
  CHECK_FALSE(build_domain(empty, ground, Domain::Rat).empty());
}

TEST_CASE("canonical_instances") {
  ConstraintSet empty;

  auto tau = one("R(x) -> R(x)@k.");
  auto dbs = canonical_instances(empty, tau, Domain::Rat);
  REQUIRE(dbs.size() == 1);
  CHECK(dbs[0].db.global == FactSet{{"R", {Value(0)}}});
  CHECK(dbs[0].db.local.empty());  // bare body, no nodes

  // an unsatisfiable comparison filters everything out
  auto never = one("R(x), x < x -> R(x)@k.");
  CHECK(canonical_instances(empty, never, Domain::Rat).empty());

  // body node variables map one-one onto an initial segment
  auto dist = one("R(x)@n, S(x,y)@m -> R(x)@m.");
  auto ddbs = canonical_instances(empty, dist, Domain::Rat);
  REQUIRE_FALSE(ddbs.empty());
  CHECK(ddbs[0].db.nodes() == std::set<NodeId>{0, 1});
  CHECK(ddbs[0].v.node.at("n") != ddbs[0].v.node.at("m"));
}

static const char* kBroadcastRules =
    "Range(l,u) -> Range(l,u)@k.\n"
    "Message(s,r) -> Message(s,r)@k.\n"
    "Message(s,r)@k, Range(l,u)@m, l <= s, s <= u -> Message(s,r)@m.\n";

static const char* kBroadcastGoal =
    "Message(s1,r), Message(s2,r), Range(l,u), "
    "l <= s1, s1 <= u, l <= s2, s2 <= u "
    "-> Message(s1,r)@k, Message(s2,r)@k.";

TEST_CASE("canonical instance count for the broadcast goal") {
  auto sigma = parse_constraints(kBroadcastRules);
  auto tau = one(kBroadcastGoal);
  CHECK(canonical_instances(sigma, tau, Domain::Rat).size() == 525);
}

TEST_CASE("head_extension_exists") {
  auto tau = one("R(x) -> R(x)@k.");
  DistributedInstance d;
  d.add_local(2, {"R", {Value(0)}});
  ChaseState state = make_state(d);

  Valuation v;
  v.data = {{"x", Value(0)}};
  auto ext = head_extension_exists(v, tau, state);
  REQUIRE(ext.has_value());
  CHECK(ext->node.at("k") == 2);

  v.data = {{"x", Value(1)}};
  CHECK_FALSE(head_extension_exists(v, tau, state).has_value());

  // degd heads degenerate to the equality test, through merges
  auto eq = one("R(x)@k, R(x)@m -> k = m.");
  Valuation w;
  w.node = {{"k", 2}, {"m", 3}};
  CHECK_FALSE(head_extension_exists(w, eq, state).has_value());
  state.node_repr[3] = 2;
  CHECK(head_extension_exists(w, eq, state).has_value());
}

TEST_CASE("the broadcast rules imply the two-message goal") {
  auto sigma = parse_constraints(kBroadcastRules);
  auto tau = one(kBroadcastGoal);
  for (Domain dom : {Domain::Nat, Domain::Int, Domain::Rat}) {
    ImplicationOptions opts;
    opts.domain = dom;
    auto v = decide_implication(sigma, tau, opts);
    CHECK(v.holds);
    CHECK_FALSE(v.stats.single_db_mode);
    CHECK(v.stats.canonical_dbs > 0);
  }
}

TEST_CASE("dropping the shipping rule refutes the goal") {
  auto sigma = parse_constraints(
      "Range(l,u) -> Range(l,u)@k.\n"
      "Message(s,r) -> Message(s,r)@k.\n");
  auto tau = one(kBroadcastGoal);
  auto v = decide_implication(sigma, tau);
  CHECK_FALSE(v.holds);
  REQUIRE(v.countermodel.has_value());
  REQUIRE(v.witness.has_value());
  // self-verification: the countermodel is a model of sigma and the
  // witness valuation has no head extension
  CHECK(model_check(*v.countermodel, sigma).empty());
  CHECK_FALSE(satisfies(*v.countermodel, tau, sigma.schema));
}

TEST_CASE("comparison-free inputs use the single-instance mode") {
  auto sigma = parse_constraints(
      "Lineitem(l,o) -> Lineitem(l,o)@k.\n"
      "Orders(o,c) -> Orders(o,c)@k.\n"
      "Cust(c,n) -> Cust(c,n)@k.\n"
      "Lineitem(l,o), Lineitem(l,o2)@k -> Lineitem(l,o)@k.\n"
      "Lineitem(l,o)@k, Orders(o,c) -> Orders(o,c)@k.\n"
      "Orders(o,c)@k, Cust(c,n) -> Cust(c,n)@k.\n");
  auto tau = one(
      "Lineitem(l,o), Orders(o,c), Cust(c,n) -> "
      "Lineitem(l,o)@k, Orders(o,c)@k, Cust(c,n)@k.");
  auto v = decide_implication(sigma, tau);
  CHECK(v.holds);
  CHECK(v.stats.single_db_mode);
  CHECK(v.stats.canonical_dbs == 1);
}

TEST_CASE("degd conclusions") {
  ConstraintSet empty;
  // trivially reflexive
  CHECK(decide_implication(empty, one("R(x) -> x = x.")).holds);
  // nothing forces co-location
  auto v = decide_implication(empty, one("R(x)@k, R(x)@m -> k = m."));
  CHECK_FALSE(v.holds);
  REQUIRE(v.countermodel.has_value());
  CHECK_FALSE(satisfies(*v.countermodel, one("R(x)@k, R(x)@m -> k = m.")));
}

TEST_CASE("non-data-full premises are rejected") {
  auto sigma =
      parse_constraints("Emp(x,y), Sal(y,z) -> Emp(x,y2)@k, Sal(y2,z)@k.");
  auto tau = one("Emp(x,y) -> Emp(x,y)@k.");
  CHECK_THROWS_AS(decide_implication(sigma, tau), Error);
}

TEST_CASE("verdicts shrink with the domain and ignore the job count") {
  testgen::Rng rng(41);
  testgen::GenOptions opt;
  opt.data_full = true;
  opt.constants = false;
  opt.max_body = 2;
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    auto cs = testgen::gen_constraint_set(rng, opt);
    auto tau = testgen::gen_constraint(rng, cs.schema, opt);
    ImplicationVerdict nat, intg, rat;
    try {
      ImplicationOptions o;
      o.domain = Domain::Nat;
      nat = decide_implication(cs, tau, o);
      o.domain = Domain::Int;
      intg = decide_implication(cs, tau, o);
      o.domain = Domain::Rat;
      rat = decide_implication(cs, tau, o);
    } catch (const Error&) {
      continue;  // generated arity clash
    }
    ++checked;
    // a countermodel over a subdomain also lives in the larger domain
    if (rat.holds) CHECK(intg.holds);
    if (intg.holds) CHECK(nat.holds);

    ImplicationOptions par;
    par.domain = Domain::Rat;
    par.jobs = 4;
    CHECK(decide_implication(cs, tau, par).holds == rat.holds);
  }
  CHECK(checked > 20);
}
