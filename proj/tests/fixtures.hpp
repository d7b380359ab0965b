#pragma once

#include <cstdlib>
#include <string>

#include "nrct/ast.hpp"
#include "nrct/eval.hpp"
#include "nrct/lang.hpp"
#include "nrct/parser.hpp"
#include "nrct/store.hpp"
#include "nrct/trace.hpp"

namespace nrct::fixtures {

// The running example tables.
//   R(A,B,C): (1,2,3) (1,3,3) (7,42,4), labels r, r1..r3, r11..r33
//   S(C,D):   (2,3) (2,4) (3,7),        labels s, s1..s3, s11..s32
// The D cell of S's third row is named s32.
inline Store rs_store() {
  Store st;
  auto cell = [&](const std::string& name, long long v) {
    st.bind(Label(name), Constructor::of_int(BigInt(v)));
  };
  auto row = [&](const std::string& name,
                 std::vector<std::pair<std::string, std::string>> fields) {
    std::vector<std::pair<std::string, Label>> fs;
    for (auto& [f, l] : fields) fs.emplace_back(f, Label(l));
    st.bind(Label(name), Constructor::of_record(std::move(fs)));
  };
  auto table = [&](const std::string& name, std::vector<std::string> rows) {
    LabelMultiset ms;
    for (auto& r : rows) ms.add(Label(r), 1);
    st.bind(Label(name), Constructor::of_coll(std::move(ms)));
  };

  cell("r11", 1), cell("r12", 2), cell("r13", 3);
  cell("r21", 1), cell("r22", 3), cell("r23", 3);
  cell("r31", 7), cell("r32", 42), cell("r33", 4);
  row("r1", {{"A", "r11"}, {"B", "r12"}, {"C", "r13"}});
  row("r2", {{"A", "r21"}, {"B", "r22"}, {"C", "r23"}});
  row("r3", {{"A", "r31"}, {"B", "r32"}, {"C", "r33"}});
  table("r", {"r1", "r2", "r3"});

  cell("s11", 2), cell("s12", 3);
  cell("s21", 2), cell("s22", 4);
  cell("s31", 3), cell("s32", 7);
  row("s1", {{"C", "s11"}, {"D", "s12"}});
  row("s2", {{"C", "s21"}, {"D", "s22"}});
  row("s3", {{"C", "s31"}, {"D", "s32"}});
  table("s", {"s1", "s2", "s3"});

  return st;
}

inline const char* q1_text() {
  return "for (x in r) for (y in s) "
         "if x.C == y.C then {{A: x.A, B: x.B, D: y.D}} else {}";
}

inline const char* q2_text() {
  return "{{C: 42, D: sum (y in s) if y.C == 2 then y.D else 0}} union "
         "(for (x in r) if x.C == 4 then {{C: x.B, D: x.A}} else {})";
}

// Q3 maps Q1's output to its (A, D) columns.
inline std::string q3_text() {
  return std::string("for (z in ") + q1_text() + ") {{A: z.A, D: z.D}}";
}

struct Compiled {
  Store store;
  StoreType psi;
  SExprPtr surface;
  CExprPtr core;
  TypePtr type;
  Label dest{"out"};
};

inline Compiled compile_on_rs(const std::string& text) {
  Compiled c;
  c.store = rs_store();
  auto psi = infer_store_type(c.store);
  c.psi = *psi;
  Context ctx;
  ctx.store = c.psi;
  auto [type, annotated] = surface_typecheck(ctx, parse_expr(text));
  c.surface = annotated;
  c.type = type;
  c.core = anormalize(desugar(annotated));
  return c;
}

inline std::pair<Store, TracePtr> run_traced(const Compiled& c) {
  FreshSupply supply;
  for (const auto& [l, k] : c.store.cells()) supply.avoid(l);
  return traced_eval(c.store, c.dest, c.core, supply);
}

inline LabelSet rs_frontier(const Compiled& c) {
  LabelSet frontier;
  for (const auto& [l, k] : c.store.cells()) frontier.insert(l);
  frontier.insert(c.dest);
  return frontier;
}

inline std::string fixture_dir() {
  const char* env = std::getenv("NRCT_FIXTURES");
  return env ? env : "fixtures";
}

}  // namespace nrct::fixtures
