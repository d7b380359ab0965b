#include <doctest.h>

#include "fixtures.hpp"
#include "nrct/eval.hpp"
#include "nrct/lang.hpp"
#include "nrct/parser.hpp"

using namespace nrct;

TEST_CASE("denotational evaluator on scalar examples") {
  ValueEnv env;
  env.labels[Label("x")] = Value::of_int(5);
  env.labels[Label("y")] = Value::of_int(5);

  ValuePtr v = denote(parse_expr("if x == 5 then y + 42 else x"), env);
  CHECK(v->intval() == 47);

  env.labels[Label("x")] = Value::of_int(3);
  CHECK(denote(parse_expr("if x == 5 then y + 42 else x"), env)->intval() == 3);

  CHECK(denote(parse_expr("{}"), env)->bag().empty());
}

TEST_CASE("denotational evaluator on the fixture queries") {
  Store rs = fixtures::rs_store();
  auto psi = infer_store_type(rs);
  ValueEnv env;
  for (const auto& [l, t] : *psi) env.labels[l] = readback(rs, t, l);

  ValuePtr q2 = denote(parse_expr(fixtures::q2_text()), env);
  CHECK(to_string(q2) == "{(C: 42, D: 7): 2}");

  ValuePtr q1 = denote(parse_expr(fixtures::q1_text()), env);
  CHECK(to_string(q1) == "{(A: 1, B: 2, D: 7), (A: 1, B: 3, D: 7)}");
}

TEST_CASE("operational evaluation binds the destination") {
  Store s;
  s.bind(Label("a"), Constructor::of_int(40));
  s.bind(Label("b"), Constructor::of_int(2));
  FreshSupply supply;
  CExprPtr e = CoreExpr::term_e(
      Term::plus(W::mklab(Label("a")), W::mklab(Label("b"))));
  Store out = eval(s, Label("dest"), e, supply);
  CHECK(out.at(Label("dest")).i == 42);
  CHECK(out.extends(s));
}

TEST_CASE("iteration over the empty collection adds only the result") {
  Store s;
  s.bind(Label("c"), Constructor::of_coll({}));
  FreshSupply supply;
  CExprPtr e = anormalize(parse_expr("for (x in c) {x}"));
  Store out = eval(s, Label("dest"), e, supply);
  CHECK(out.at(Label("dest")).coll.empty());
  CHECK(out.size() == 2);  // just c and dest
}

TEST_CASE("iteration preserves multiplicities") {
  Store s;
  s.bind(Label("n"), Constructor::of_int(3));
  LabelMultiset ms;
  ms.add(Label("n"), 4);
  s.bind(Label("c"), Constructor::of_coll(ms));
  FreshSupply supply;
  CExprPtr e = anormalize(parse_expr("for (x in c) {x + x}"));
  Store out = eval(s, Label("dest"), e, supply);
  const Constructor& k = out.at(Label("dest"));
  REQUIRE(k.kind == Constructor::Kind::Coll);
  REQUIRE(k.coll.entries().size() == 1);
  CHECK(k.coll.entries().begin()->second == 4);
  CHECK(out.at(k.coll.entries().begin()->first).i == 6);

  // Summation is weighted by multiplicity.
  CExprPtr sum_expr = anormalize(parse_expr("sum (x in c) x"));
  FreshSupply supply2;
  Store out2 = eval(s, Label("total"), sum_expr, supply2);
  CHECK(out2.at(Label("total")).i == 12);
}

TEST_CASE("join and aggregation queries on the fixture store") {
  fixtures::Compiled q1 = fixtures::compile_on_rs(fixtures::q1_text());
  FreshSupply supply;
  Store out = eval(q1.store, q1.dest, q1.core, supply);
  ValuePtr v = readback(out, q1.type, q1.dest);
  CHECK(to_string(v) == "{(A: 1, B: 2, D: 7), (A: 1, B: 3, D: 7)}");

  fixtures::Compiled q2 = fixtures::compile_on_rs(fixtures::q2_text());
  FreshSupply supply2;
  Store out2 = eval(q2.store, q2.dest, q2.core, supply2);
  CHECK(to_string(readback(out2, q2.type, q2.dest)) == "{(C: 42, D: 7): 2}");
}
