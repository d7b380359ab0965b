#include <doctest.h>

#include "fixtures.hpp"
#include "goldens.hpp"
#include "nrct/error.hpp"
#include "nrct/lang.hpp"
#include "nrct/parser.hpp"

using namespace nrct;

namespace {
Label L(const std::string& s) { return Label(s); }
}

TEST_CASE("out, in*, out*, Wr") {
  TracePtr assign = Trace::assign(L("l"), Term::int_lit(47));
  CHECK(trace_out(assign) == L("l"));

  TracePtr t2 = Trace::assign(L("m"), Term::copy(W::mklab(L("l"))));
  TracePtr seq = Trace::seq(assign, t2);
  CHECK(trace_out(seq) == L("m"));

  Theta theta;
  theta.push_back({L("l1"), Trace::assign(L("o1"), Term::int_lit(1)), 2});
  theta.push_back({L("l2"), Trace::assign(L("o2"), Term::int_lit(2)), 1});
  CHECK(in_star(theta).multiplicity(L("l1")) == 2);
  CHECK(in_star(theta).multiplicity(L("l2")) == 1);
  CHECK(out_star(theta).multiplicity(L("o1")) == 2);

  // Wr of the scalar conditional example: the test step and the branch.
  TracePtr cond_tr = Trace::seq(
      Trace::assign(L("l1'"), Term::eq(W::mklab(L("lx")), W::mklab(L("l5")))),
      Trace::cond(L("l1'"), true,
                  Trace::assign(L("l'"), Term::plus(W::mklab(L("ly")),
                                                    W::mklab(L("l42")))),
                  nullptr, nullptr));
  LabelSet wr = written_labels(cond_tr);
  CHECK(wr == LabelSet{L("l1'"), L("l'")});
}

TEST_CASE("traced evaluation of the scalar conditional example") {
  // if x = 5 then y + 42 else x, with values chosen so the result is 47:
  // the trace tests the comparison then runs the taken branch.
  Store s;
  s.bind(L("lx"), Constructor::of_int(5));
  s.bind(L("ly"), Constructor::of_int(5));
  Context ctx;
  ctx.store = *infer_store_type(s);
  auto [ty, ann] =
      surface_typecheck(ctx, parse_expr("if lx == 5 then ly + 42 else lx"));
  CExprPtr core = anormalize(desugar(ann));
  FreshSupply supply;
  auto [out, trace] = traced_eval(s, L("res"), core, supply);
  CHECK(out.at(L("res")).i == 47);
  CHECK(trace_out(trace) == L("res"));
  std::string diag;
  CHECK(check_consistency(out, trace, &diag));

  // The conditional node records the tested label, the outcome, and both
  // branch expressions.
  std::function<TracePtr(const TracePtr&)> find_cond =
      [&](const TracePtr& t) -> TracePtr {
    if (t->kind == Trace::Kind::Cond) return t;
    if (t->kind == Trace::Kind::Seq) {
      TracePtr a = find_cond(t->t1);
      return a ? a : find_cond(t->t2);
    }
    return nullptr;
  };
  TracePtr cond_node = find_cond(trace);
  REQUIRE(cond_node);
  CHECK(cond_node->flag == true);
  CHECK(cond_node->e_then);
  CHECK(cond_node->e_else);
}

TEST_CASE("projection comprehension trace matches the published example") {
  // {pi_B(x) | x in R} over a two-row table.
  Store s;
  s.bind(L("l11"), Constructor::of_int(1));
  s.bind(L("l12"), Constructor::of_int(2));
  s.bind(L("l21"), Constructor::of_int(2));
  s.bind(L("l22"), Constructor::of_int(3));
  s.bind(L("l1"), Constructor::of_record({{"A", L("l11")}, {"B", L("l12")}}));
  s.bind(L("l2"), Constructor::of_record({{"A", L("l21")}, {"B", L("l22")}}));
  LabelMultiset rows;
  rows.add(L("l1"), 1);
  rows.add(L("l2"), 1);
  s.bind(L("l"), Constructor::of_coll(rows));

  Context ctx;
  ctx.store = *infer_store_type(s);
  SExprPtr sugar =
      sx::mapcomp("x", sx::lab(L("l")), sx::proj(sx::var("x"), "B"));
  auto [ty, ann] = surface_typecheck(ctx, sugar);
  CExprPtr core = anormalize(desugar(ann));
  FreshSupply supply;
  auto [out, trace] = traced_eval(s, L("l'"), core, supply);

  CHECK(to_string(readback(out, ty, L("l'"))) == "{2, 3}");

  LabelSet frontier;
  for (const auto& [lab, k] : s.cells()) frontier.insert(lab);
  frontier.insert(L("l'"));
  TracePtr golden = parse_trace(goldens::pib_trace());
  CHECK(trace_alpha_eq(trace, golden, frontier, /*compare_exprs=*/false));
}

TEST_CASE("join query trace matches the published example") {
  fixtures::Compiled q1 = fixtures::compile_on_rs(fixtures::q1_text());
  q1.dest = L("l");
  auto [out, trace] = fixtures::run_traced(q1);
  TracePtr golden = parse_trace(goldens::q1_trace());
  CHECK(trace_alpha_eq(trace, golden, fixtures::rs_frontier(q1), false));

  std::string diag;
  CHECK(check_consistency(out, trace, &diag));
  TraceType tt = trace_typecheck(q1.psi, trace);
  CHECK(tt.out_label == L("l"));
  CHECK(to_string(tt.out_type) == "{(A: int, B: int, D: int)}");
}

TEST_CASE("aggregation query trace matches the published example") {
  fixtures::Compiled q2 = fixtures::compile_on_rs(fixtures::q2_text());
  q2.dest = L("l'");
  auto [out, trace] = fixtures::run_traced(q2);
  TracePtr golden = parse_trace(goldens::q2_trace());
  CHECK(trace_alpha_eq(trace, golden, fixtures::rs_frontier(q2), false));
  CHECK(to_string(readback_infer(out, q2.dest)) == "{(C: 42, D: 7): 2}");
}

TEST_CASE("consistency rejects tampered stores") {
  TracePtr t = Trace::assign(L("l"), Term::int_lit(47));
  Store good;
  good.bind(L("l"), Constructor::of_int(47));
  CHECK(check_consistency(good, t));

  Store bad;
  bad.bind(L("l"), Constructor::of_int(46));
  std::string diag;
  CHECK(!check_consistency(bad, t, &diag));
  CHECK(diag.find("l") != std::string::npos);

  // A conditional recording t is violated when the test is now false.
  Store flipped;
  flipped.bind(L("b"), Constructor::of_bool(false));
  flipped.bind(L("o"), Constructor::of_int(1));
  TracePtr cond = Trace::cond(L("b"), true,
                              Trace::assign(L("o"), Term::int_lit(1)),
                              nullptr, nullptr);
  CHECK(!check_consistency(flipped, cond, &diag));
}

TEST_CASE("trace typing accepts sound traces and rejects abuse") {
  StoreType psi;
  psi[L("l1")] = Type::intty();
  psi[L("l2")] = Type::intty();
  TracePtr ok = Trace::assign(L("l"), Term::plus(W::mklab(L("l1")),
                                                 W::mklab(L("l2"))));
  TraceType tt = trace_typecheck(psi, ok);
  CHECK(tt.out_label == L("l"));
  CHECK(tt.out_type->is_int());

  // The second step misuses the first step's output.
  TracePtr bad = Trace::seq(
      ok, Trace::assign(L("m"), Term::logical_not(W::mklab(L("l")))));
  CHECK_THROWS_AS(trace_typecheck(psi, bad), Error);
}

TEST_CASE("alpha equivalence") {
  TracePtr t = parse_trace(goldens::pib_trace());
  LabelSet frontier = {L("l"), L("l1"), L("l2"), L("l12"), L("l22"), L("l'")};
  CHECK(trace_alpha_eq(t, t, frontier, false));

  // Renaming an internal label is fine; traces of different shape are not.
  TracePtr renamed = parse_trace(
      "l' <- comp(l,{[l1] m1' <- proj_B(l1,l12), [l2] l2' <- proj_B(l2,l22)})");
  CHECK(trace_alpha_eq(t, renamed, frontier, false));

  // But a frontier label cannot be renamed.
  TracePtr moved = parse_trace(
      "l' <- comp(l,{[l1] l1' <- proj_B(l1,l22), [l2] l2' <- proj_B(l2,l12)})");
  CHECK(!trace_alpha_eq(t, moved, frontier, false));

  TracePtr shape = parse_trace("l' <- comp(l,{[l1] l1' <- proj_B(l1,l12)})");
  CHECK(!trace_alpha_eq(t, shape, frontier, false));

  // Sequencing is compared up to associativity.
  TracePtr flat1 = parse_trace("a <- 1; b <- 2; c <- a + b");
  TracePtr flat2 = Trace::seq(
      Trace::seq(Trace::assign(L("a"), Term::int_lit(1)),
                 Trace::assign(L("b"), Term::int_lit(2))),
      Trace::assign(L("c"), Term::plus(W::mklab(L("a")), W::mklab(L("b")))));
  CHECK(trace_alpha_eq(flat1, flat2, {}, false));
}

TEST_CASE("trace text round trip") {
  fixtures::Compiled q2 = fixtures::compile_on_rs(fixtures::q2_text());
  q2.dest = L("l'");
  auto [out, trace] = fixtures::run_traced(q2);
  std::string text = trace_to_text(trace);
  TracePtr back = parse_trace(text);
  LabelSet everything = mentioned_labels(trace);
  CHECK(trace_alpha_eq(trace, back, everything, /*compare_exprs=*/true));
  CHECK(trace_to_text(back) == text);
}

TEST_CASE("trace dot export names data flow") {
  TracePtr t = parse_trace("a <- 1; b <- 2; c <- a + b");
  std::string dot = trace_to_dot(t);
  CHECK(dot.find("\"a\" -> \"c\"") != std::string::npos);
  CHECK(dot.find("\"b\" -> \"c\"") != std::string::npos);
}
