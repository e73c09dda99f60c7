#include <doctest.h>

#include <cstdlib>

#include "distcheck/chase.hpp"
#include "distcheck/core.hpp"
#include "distcheck/error.hpp"
#include "distcheck/parser.hpp"
#include "generators.hpp"

using namespace distcheck;

TEST_CASE("applicable and apply_step") {
  auto d = parse_instance("global {} local 1 { R(0) } local 2 { S(0,1) }");
  auto s = std::get<Dtgd>(
      parse_constraints("R(x)@k, S(x,y)@m -> R(x)@u, S(x,y)@u.").items[0]);
  ChaseState state = make_state(d);
  CHECK(fresh_node(state) == 3);

  Valuation w;
  w.data = {{"x", Value(0)}, {"y", Value(1)}};
  w.node = {{"k", 1}, {"m", 2}, {"u", 3}};
  CHECK(applicable(s, w, state));

  // the head node variable must map to the fresh node
  Valuation stale = w;
  stale.node["u"] = 1;
  CHECK_FALSE(applicable(s, stale, state));

  ChaseState after = apply_step(s, w, state);
  CHECK(after.inst.local.at(3) == FactSet{{"R", {Value(0)}},
                                          {"S", {Value(0), Value(1)}}});
  CHECK(fresh_node(after) == 4);
  // satisfied now: the same trigger is no longer applicable
  Valuation again = w;
  again.node["u"] = 4;
  CHECK_FALSE(applicable(s, again, after));
  CHECK_THROWS_AS(apply_step(s, again, after), Error);
}

static const char* kBroadcastRules =
    "Range(l,u) -> Range(l,u)@k.\n"
    "Message(s,r) -> Message(s,r)@k.\n"
    "Message(s,r)@k, Range(l,u)@m, l <= s, s <= u -> Message(s,r)@m.\n";

TEST_CASE("run_chase repairs the broadcast rules") {
  auto sigma = parse_constraints(kBroadcastRules);
  auto d = parse_instance("global { Message(1,9) Message(2,9) Range(0,5) }");
  auto trace = run_chase(d, sigma);
  CHECK(trace.outcome == ChaseOutcome::Success);
  CHECK(model_check(trace.state.inst, sigma).empty());

  // both messages fall into the range, so they reach the Range node
  NodeId range_node = 0;
  for (const auto& [k, fs] : trace.state.inst.local)
    if (fs.count({"Range", {Value(0), Value(5)}})) range_node = k;
  const FactSet& at = trace.state.inst.local.at(range_node);
  CHECK(at.count({"Message", {Value(1), Value(9)}}) == 1);
  CHECK(at.count({"Message", {Value(2), Value(9)}}) == 1);
  // no global facts are invented
  CHECK(trace.state.inst.global == d.global);
}

TEST_CASE("run_chase with no constraints is the identity") {
  auto d = parse_instance("global { R(1) } local 0 { R(1) }");
  auto trace = run_chase(d, ConstraintSet{});
  CHECK(trace.steps.empty());
  CHECK(trace.state.inst == d);
}

TEST_CASE("value-identifying degds") {
  auto sigma = parse_constraints("Sal(x,y), Sal(x,z) -> y = z.");
  auto d = parse_instance("global { Sal(1,2) Sal(1,3) }");

  auto strict = run_chase(d, sigma);
  CHECK(strict.outcome == ChaseOutcome::Failed);
  CHECK(strict.failed_constraint == 0);
  REQUIRE(strict.failure_witness.has_value());
  CHECK(strict.failure_witness->data.at("x") == Value(1));

  ChaseOptions ident;
  ident.mode = ChaseMode::Identify;
  auto merged = run_chase(d, sigma, ident);
  CHECK(merged.outcome == ChaseOutcome::Success);
  CHECK(merged.state.inst.global.size() == 1);
  CHECK(merged.state.resolve(Value(3)) == merged.state.resolve(Value(2)));

  // both values protected: nothing may be merged
  ident.protected_constants = {Value(2), Value(3)};
  auto blocked = run_chase(d, sigma, ident);
  CHECK(blocked.outcome == ChaseOutcome::Failed);
}

TEST_CASE("node-identifying degds merge or fail") {
  auto sigma = parse_constraints("R(x)@k, R(x)@m -> k = m.");
  auto d = parse_instance("global {} local 1 { R(0) } local 2 { R(0) }");

  auto merged = run_chase(d, sigma);
  CHECK(merged.outcome == ChaseOutcome::Success);
  CHECK(merged.state.inst.nodes().size() == 1);
  CHECK(merged.state.find(1) == merged.state.find(2));

  ChaseOptions fail;
  fail.degd_nodes = DegdNodeSemantics::Fail;
  auto failed = run_chase(d, sigma, fail);
  CHECK(failed.outcome == ChaseOutcome::Failed);
  CHECK(failed.failed_constraint == 0);
}

TEST_CASE("fresh node ids are never reused") {
  auto d = parse_instance("global {} local 1 { R(0) } local 5 { R(0) }");
  ChaseState s = make_state(d);
  CHECK(fresh_node(s) == 6);

  auto sigma = parse_constraints("R(x)@k, R(x)@m -> k = m.");
  auto trace = run_chase(d, sigma);
  // merging 1 and 5 does not free either id
  CHECK(fresh_node(trace.state) == 6);
}

TEST_CASE("replay reproduces the final instance") {
  auto sigma = parse_constraints(kBroadcastRules);
  auto d = parse_instance("global { Message(1,9) Range(0,5) }");
  auto trace = run_chase(d, sigma);
  CHECK(replay(trace) == trace.state.inst);
}

TEST_CASE("step budget") {
  auto sigma = parse_constraints("R(x) -> R(x)@k.");
  auto d = parse_instance("global { R(0) R(1) R(2) }");

  ChaseOptions opts;
  opts.budget = 1;
  CHECK_THROWS_AS(run_chase(d, sigma, opts), Error);

  // the environment variable wins over the explicit option
  setenv("DISTCHECK_STEP_BUDGET", "100", 1);
  CHECK(run_chase(d, sigma, opts).outcome == ChaseOutcome::Success);
  setenv("DISTCHECK_STEP_BUDGET", "1", 1);
  CHECK_THROWS_AS(run_chase(d, sigma), Error);
  unsetenv("DISTCHECK_STEP_BUDGET");
}

TEST_CASE("run_chase requires data-full dtgds") {
  auto sigma =
      parse_constraints("Emp(x,y), Sal(y,z) -> Emp(x,y2)@k, Sal(y2,z)@k.");
  auto d = parse_instance("global { Emp(0,1) Sal(1,2) }");
  CHECK_THROWS_AS(run_chase(d, sigma), Error);
}

TEST_CASE("successful chases produce models and invent no values") {
  testgen::Rng rng(31);
  testgen::GenOptions opt;
  opt.data_full = true;
  int successes = 0;
  for (int i = 0; i < 250; ++i) {
    auto cs = testgen::gen_constraint_set(rng, opt);
    auto d = testgen::gen_instance(rng, cs.schema);
    ChaseTrace trace;
    try {
      trace = run_chase(d, cs);
    } catch (const Error&) {
      continue;  // arity clash between generated schema uses
    }
    if (trace.outcome != ChaseOutcome::Success) continue;
    ++successes;
    CHECK(model_check(trace.state.inst, cs).empty());

    std::set<Value> allowed = d.adom();
    for (const Value& v : constants_of(cs)) allowed.insert(v);
    for (const Value& v : trace.state.inst.adom())
      CHECK(allowed.count(v) == 1);

    CHECK(replay(trace) == trace.state.inst);
  }
  CHECK(successes > 100);
}
