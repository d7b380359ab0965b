#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrct/ast.hpp"
#include "nrct/store.hpp"

namespace nrct {

struct Trace;
using TracePtr = std::shared_ptr<const Trace>;

// One comprehension/sum iteration: the input label it consumed, the
// subtrace that ran for it, and the input's multiplicity. Entries of a
// labeled trace set have pairwise-distinct input labels.
struct ThetaEntry {
  Label in;
  TracePtr tr;
  BigInt mult;
};
using Theta = std::vector<ThetaEntry>;  // kept sorted by input label

// Execution history of one evaluation.
//  - Assign: dest <- t
//  - Proj:   dest <- proj_field(rec, field_label)
//  - Seq:    T1; T2
//  - Cond:   records the tested label, its boolean value, the taken
//            branch's subtrace (which writes the destination), and both
//            branch expressions
//  - Comp/Sum: record the source label, per-element subtraces, and the body
struct Trace {
  enum class Kind { Assign, Proj, Seq, Cond, Comp, Sum };

  Kind kind = Kind::Assign;
  Label dest;  // Assign, Proj, Comp, Sum (Cond's output is out(sub))
  Term term;   // Assign

  std::string field;  // Proj
  Label rec, rec_field;

  TracePtr t1, t2;  // Seq

  Label test;  // Cond
  bool flag = false;
  TracePtr sub;
  CExprPtr e_then, e_else;  // may be null on parsed-back compact traces

  Label src;  // Comp, Sum
  Theta theta;
  std::string var;
  CExprPtr body;  // may be null

  static TracePtr assign(Label dest, Term t);
  static TracePtr proj(Label dest, std::string field, Label rec,
                       Label rec_field);
  static TracePtr seq(TracePtr a, TracePtr b);
  static TracePtr cond(Label test, bool flag, TracePtr sub, CExprPtr e_then,
                       CExprPtr e_else);
  static TracePtr comp(Label dest, Label src, Theta theta, std::string var,
                       CExprPtr body);
  static TracePtr sum(Label dest, Label src, Theta theta, std::string var,
                      CExprPtr body);
};

// out(T): the result label.
Label trace_out(const TracePtr& t);
// in*(Θ) and out*(Θ), as multisets.
LabelMultiset in_star(const Theta& theta);
LabelMultiset out_star(const Theta& theta);
// Wr(T): every label written by the trace.
LabelSet written_labels(const TracePtr& t);
// All labels a trace mentions (written, read, and in expressions).
LabelSet mentioned_labels(const TracePtr& t);

// Traced evaluation: same store result as eval(), plus the trace.
std::pair<Store, TracePtr> traced_eval(const Store& sigma, const Label& dest,
                                       const CExprPtr& e, FreshSupply& supply);

// sigma |= T: every claim the trace makes holds in the store. On failure
// `diag` names the first violated leaf.
bool check_consistency(const Store& sigma, const TracePtr& t,
                       std::string* diag = nullptr);

// Trace typing: in a store matching psi, T produces out_label : out_type.
// Rejections throw a type error naming the offending node. Requires
// expression annotations.
struct TraceType {
  Label out_label;
  TypePtr out_type;
};
TraceType trace_typecheck(const StoreType& psi, const TracePtr& t);

// Structural equality up to a bijection on labels that fixes `frontier`.
// Bound variables in expression annotations are also matched up to
// renaming. When `compare_exprs` is false, expression annotations are
// ignored (figure-style compact traces omit them).
bool trace_alpha_eq(const TracePtr& a, const TracePtr& b,
                    const LabelSet& frontier, bool compare_exprs = true);

// The witnessing bijection (a-labels to b-labels) when the traces match.
std::optional<std::map<Label, Label>> trace_alpha_match(
    const TracePtr& a, const TracePtr& b, const LabelSet& frontier,
    bool compare_exprs = true);

// Applies a label renaming; labels outside the map are kept.
TracePtr trace_rename(const TracePtr& t, const std::map<Label, Label>& m);

// Paper-style text rendering; parse_trace accepts the same shape with
// optional expression annotations, multiplicities, and '@ dest' marks.
std::string trace_to_text(const TracePtr& t);
TracePtr parse_trace(const std::string& text);

// Graphviz rendering: labels as nodes, data flow as edges, one cluster per
// comprehension entry and conditional.
std::string trace_to_dot(const TracePtr& t);

}  // namespace nrct
