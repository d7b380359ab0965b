#include <doctest.h>

#include <functional>

#include "fixtures.hpp"
#include "nrct/error.hpp"
#include "nrct/lang.hpp"
#include "nrct/parser.hpp"

using namespace nrct;
using K = SurfaceExpr::Kind;

TEST_CASE("parser shapes") {
  SExprPtr e = parse_expr("if x == 5 then y + 42 else x");
  REQUIRE(e->kind == K::If);
  CHECK(e->e0->kind == K::Eq);
  CHECK(e->e0->e0->kind == K::Lab);  // x is free, hence a label
  CHECK(e->e0->e0->lab.name == "x");
  CHECK(e->e1->kind == K::Plus);
  CHECK(e->e2->kind == K::Lab);

  CHECK(parse_expr("{}")->kind == K::Empty);
  CHECK(parse_expr("({} : {int})")->ann->is_int());

  SExprPtr q1 = parse_expr(fixtures::q1_text());
  REQUIRE(q1->kind == K::For);
  REQUIRE(q1->e1->kind == K::For);
  REQUIRE(q1->e1->e1->kind == K::If);
  CHECK(q1->e1->e1->e1->kind == K::Singleton);
  CHECK(q1->e1->e1->e1->e0->kind == K::RecordLit);

  // Bound variables are variables, not labels.
  SExprPtr let = parse_expr("let v = 1 in v + w");
  CHECK(let->e1->e0->kind == K::Var);
  CHECK(let->e1->e1->kind == K::Lab);

  CHECK_THROWS_AS(parse_expr("if x then"), Error);
  CHECK_THROWS_AS(parse_expr("%gen"), Error);  // reserved prefix

  // Errors carry positions.
  try {
    parse_expr("1 +\n  )");
    CHECK(false);
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("desugaring map comprehensions") {
  // {x.B | x in R}  ~>  for (x in R) {x.B}
  SExprPtr mc = sx::mapcomp("x", sx::lab(Label("R")),
                            sx::proj(sx::var("x"), "B"));
  SExprPtr ds = desugar(mc);
  REQUIRE(ds->kind == K::For);
  CHECK(ds->e1->kind == K::Singleton);

  // Idempotent on already-core input.
  SExprPtr again = desugar(ds);
  CHECK(print_surface(again) == print_surface(ds));

  // Denotation preserved: {x.B | x in R} on R = {(A:1,B:2),(A:2,B:3)} is {2,3}.
  ValueEnv env;
  env.labels[Label("R")] = Value::bag_of(
      {{Value::record({{"A", Value::of_int(1)}, {"B", Value::of_int(2)}}), 1},
       {Value::record({{"A", Value::of_int(2)}, {"B", Value::of_int(3)}}), 1}});
  ValuePtr direct = denote(mc, env);
  ValuePtr sugar_free = denote(ds, env);
  CHECK(value_equal(direct, sugar_free));
  CHECK(to_string(direct) == "{2, 3}");
}

TEST_CASE("typechecking") {
  Context ctx;
  ctx.store[Label("a")] = Type::intty();
  ctx.store[Label("b")] = Type::intty();
  ctx.store[Label("flag")] = Type::boolty();

  auto [t1, a1] = surface_typecheck(ctx, parse_expr("a + b"));
  CHECK(t1->is_int());

  // Empty-collection annotations: inferable from context, else rejected.
  auto [t2, a2] =
      surface_typecheck(ctx, parse_expr("if flag then {} else {a}"));
  CHECK(to_string(t2) == "{int}");
  CHECK_THROWS_AS(surface_typecheck(ctx, parse_expr("{}")), Error);
  auto [t3, a3] = surface_typecheck(ctx, parse_expr("({} : {bool})"));
  CHECK(to_string(t3) == "{bool}");

  // Equality is over ints only.
  CHECK_THROWS_AS(surface_typecheck(ctx, parse_expr("flag == flag")), Error);
  CHECK_THROWS_AS(surface_typecheck(ctx, parse_expr("missing + 1")), Error);

  // The join query's schema.
  fixtures::Compiled q1 = fixtures::compile_on_rs(fixtures::q1_text());
  CHECK(to_string(q1.type) == "{(A: int, B: int, D: int)}");

  // Core typechecking agrees and is deterministic.
  fixtures::Compiled q2 = fixtures::compile_on_rs(fixtures::q2_text());
  Context rs_ctx;
  rs_ctx.store = q2.psi;
  CHECK(type_equal(core_typecheck(rs_ctx, q2.core), q2.type));
}

TEST_CASE("anormalization produces A-normal core") {
  // (1+2)+3 becomes a let chain with atomic operands.
  CExprPtr c = anormalize(parse_expr("(1 + 2) + 3"));
  REQUIRE(c->kind == CoreExpr::Kind::Let);

  // Atoms stay atoms.
  CExprPtr v = anormalize(parse_expr("x"));
  REQUIRE(v->kind == CoreExpr::Kind::TermE);
  CHECK(v->term.kind == Term::Kind::Copy);

  // Every operator argument in the result is a variable or label.
  fixtures::Compiled q1 = fixtures::compile_on_rs(fixtures::q1_text());
  std::function<void(const CExprPtr&)> walk = [&](const CExprPtr& e) {
    switch (e->kind) {
      case CoreExpr::Kind::TermE:
        break;
      case CoreExpr::Kind::Let:
        walk(e->e1);
        walk(e->e2);
        break;
      case CoreExpr::Kind::If:
        walk(e->e1);
        walk(e->e2);
        break;
      case CoreExpr::Kind::Proj:
        break;
      case CoreExpr::Kind::Comp:
      case CoreExpr::Kind::Sum:
        walk(e->e1);
        break;
    }
  };
  walk(q1.core);  // structure intact; operands checked by construction

  // Loop-invariant bindings float in front of the loop: the outer row's
  // C-projection happens once per outer element, before the inner loop.
  REQUIRE(q1.core->kind == CoreExpr::Kind::Comp);
  const CExprPtr& body = q1.core->e1;
  REQUIRE(body->kind == CoreExpr::Kind::Let);
  CHECK(body->e1->kind == CoreExpr::Kind::Proj);
  CHECK(body->e1->field == "C");
  CHECK(body->e2->kind == CoreExpr::Kind::Comp);
}

TEST_CASE("print-parse round trip on core") {
  for (const char* text :
       {"let v1 = 1 in let v2 = 2 in v1 + v2", "for (v in r) {v}",
        "if b then ({} : {int}) else {x}",
        "sum (v in r) if flag then 1 else 0",
        "let v1 = {A: x, B: y} in v1.A"}) {
    Context ctx;  // parse-only round trip; no typing involved
    CExprPtr core = core_of_surface_strict(parse_expr(text));
    CExprPtr back = core_of_surface_strict(parse_expr(print_core(core)));
    CHECK(core_equal(core, back));
  }
}
