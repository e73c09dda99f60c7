#include <doctest.h>

#include "distcheck/core.hpp"
#include "distcheck/parser.hpp"
#include "generators.hpp"

using namespace distcheck;

namespace {

// a=0 b=1 c=2 d=3; S(3) is stored globally but placed at no node.
DistributedInstance two_node_instance() {
  return parse_instance(
      "global { R(0,1) S(1) S(2) S(3) }\n"
      "local 1 { R(0,1) S(1) }\n"
      "local 2 { S(1) S(2) }\n");
}

std::vector<Atom> body_text(const std::string& rule) {
  return body_of(parse_constraints(rule).items[0]);
}

}  // namespace

TEST_CASE("find_valuations matches local facts for distributed atoms") {
  auto d = two_node_instance();
  Schema schema = schema_of(d);

  auto vs = find_valuations(body_text("R(x,y)@k -> R(x,y)."), {}, d, schema);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].data.at("x") == Value(0));
  CHECK(vs[0].data.at("y") == Value(1));
  CHECK(vs[0].node.at("k") == 1);

  vs = find_valuations(body_text("S(x)@k -> S(x)."), {}, d, schema);
  REQUIRE(vs.size() == 3);  // S(1)@1, S(1)@2, S(2)@2; never the skipped S(3)
  CHECK(vs[0].data.at("x") == Value(1));
  CHECK(vs[0].node.at("k") == 1);
  CHECK(vs[1].data.at("x") == Value(1));
  CHECK(vs[1].node.at("k") == 2);
  CHECK(vs[2].data.at("x") == Value(2));
  CHECK(vs[2].node.at("k") == 2);

  // bare atoms range over the global instance, including skipped facts
  vs = find_valuations(body_text("S(x) -> S(x)@k."), {}, d, schema);
  CHECK(vs.size() == 3);
}

TEST_CASE("find_valuations corner cases") {
  auto d = two_node_instance();
  Schema schema = schema_of(d);

  // the empty body has exactly the empty valuation
  auto vs = find_valuations({}, {}, d, schema);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].data.empty());
  CHECK(vs[0].node.empty());

  // comparisons filter
  auto sigma = parse_constraints("R(x,y), x < y -> R(x,y)@k.").items[0];
  CHECK(find_valuations(body_of(sigma), comps_of(sigma), d, schema).size() ==
        1);
  sigma = parse_constraints("R(x,y), y < x -> R(x,y)@k.").items[0];
  CHECK(find_valuations(body_of(sigma), comps_of(sigma), d, schema).empty());

  // repeated variables must agree
  CHECK(find_valuations(body_text("R(x,x) -> R(x,x)@k."), {}, d, schema)
            .empty());
}

TEST_CASE("satisfies") {
  auto d = two_node_instance();

  // both arguments of every R fact meet at a node carrying the S fact
  auto meet = parse_constraints("R(x,y) -> R(x,y)@k, S(y)@k.").items[0];
  CHECK(satisfies(d, meet));

  // vacuously true: no valuation passes x < x
  auto vac = parse_constraints("S(x), x < x -> S(9)@k.").items[0];
  CHECK(satisfies(d, vac));

  // non-skipping fails because S(3) lives at no node
  auto ns = parse_constraints("S(x) -> S(x)@k.").items[0];
  CHECK_FALSE(satisfies(d, ns));

  // degds
  auto key = parse_constraints("R(x,y), R(x,z) -> y = z.").items[0];
  CHECK(satisfies(d, key));
  auto co = parse_constraints("S(x)@k, S(y)@m -> k = m.").items[0];
  CHECK_FALSE(satisfies(d, co));
}

TEST_CASE("model_check reports one witness per violated constraint") {
  auto d = two_node_instance();
  auto cs = parse_constraints(
      "R(x,y) -> R(x,y)@k.\n"
      "S(x) -> S(x)@k.\n"
      "S(x)@k, S(y)@k -> x = y.\n");
  auto vio = model_check(d, cs);
  REQUIRE(vio.size() == 2);
  CHECK(vio[0].constraint == 1);
  CHECK(vio[0].witness.data.at("x") == Value(3));
  CHECK(vio[1].constraint == 2);  // S(1)@2, S(2)@2

  CHECK(model_check(d, ConstraintSet{}).empty());
}

TEST_CASE("is_data_full") {
  auto full = parse_constraints("Emp(n,d) -> Emp(n,d)@k.").items[0];
  CHECK(is_data_full(std::get<Dtgd>(full)));

  auto not_full =
      parse_constraints("Emp(x,y), Sal(y,z) -> Emp(x,y2)@k, Sal(y2,z)@k.")
          .items[0];
  CHECK_FALSE(is_data_full(std::get<Dtgd>(not_full)));

  // constants in the head are fine
  auto con = parse_constraints("R(x) -> R(7)@k.").items[0];
  CHECK(is_data_full(std::get<Dtgd>(con)));
}

TEST_CASE("normalize_heads splits by head node variable") {
  auto s = std::get<Dtgd>(
      parse_constraints("B(x) -> R(x)@k, S(x)@k, T(x).").items[0]);
  auto parts = normalize_heads(s);
  REQUIRE(parts.size() == 2);
  // the k-group comes first (order of first occurrence in the head)
  CHECK(parts[0].head.size() == 2);
  CHECK(parts[0].head[0].at->var == "k");
  CHECK(parts[1].head.size() == 1);
  CHECK_FALSE(parts[1].head[0].at.has_value());
  for (const auto& p : parts) CHECK(p.body == s.body);

  auto single = std::get<Dtgd>(parse_constraints("B(x) -> R(x)@k.").items[0]);
  CHECK(normalize_heads(single) == std::vector<Dtgd>{single});

  auto two = std::get<Dtgd>(
      parse_constraints("B(x) -> R(x)@k, S(x)@m.").items[0]);
  auto tp = normalize_heads(two);
  REQUIRE(tp.size() == 2);
  CHECK(tp[0].head[0].at->var == "k");
  CHECK(tp[1].head[0].at->var == "m");
}

TEST_CASE("normalize_heads preserves satisfaction on data-full dtgds") {
  testgen::Rng rng(11);
  testgen::GenOptions opt;
  opt.data_full = true;
  opt.degds = false;
  for (int i = 0; i < 300; ++i) {
    auto cs = testgen::gen_constraint_set(rng, opt);
    auto d = testgen::gen_instance(rng, cs.schema);
    for (const auto& c : cs.items) {
      const auto& s = std::get<Dtgd>(c);
      bool whole = satisfies(d, s, cs.schema);
      bool split = true;
      for (const auto& p : normalize_heads(s))
        split = split && satisfies(d, p, cs.schema);
      CHECK(whole == split);
    }
  }
}

TEST_CASE("satisfaction of dtgd heads is monotone in placement") {
  // adding local placements can only help a dtgd with a distributed head
  testgen::Rng rng(12);
  auto ns = parse_constraints("R0(x) -> R0(x)@k.");
  for (int i = 0; i < 100; ++i) {
    Schema schema{{"R0", 1}};
    auto d = testgen::gen_instance(rng, schema);
    if (!satisfies(d, ns.items[0], schema)) {
      DistributedInstance wider = d;
      for (const Fact& f : wider.global) wider.add_local(0, f);
      CHECK(satisfies(wider, ns.items[0], schema));
    }
  }
}
