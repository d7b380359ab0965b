#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nrct/ast.hpp"
#include "nrct/trace.hpp"

namespace nrct {

// Backward slice: the sub-trace (nodes removed, never altered) needed to
// explain the focus labels. Conditionals keep their test's dependency
// chain and their full output spine; retained iterations keep only the
// entries in the dependency closure (with their multiplicities). Returns
// null for the empty slice.
TracePtr backward_slice(const TracePtr& t, const LabelSet& focus);

// Forward slice: the sub-trace reachable from the focus labels through the
// same dependency edges. A tainted conditional test or iteration source
// taints everything the construct writes. Returns null for the empty
// slice.
TracePtr forward_slice(const TracePtr& t, const LabelSet& focus);

// Human-readable view of a (sliced) trace: copies, constants, and
// projections are substituted into the expressions that use them;
// constructor steps, conditionals (with inlined test expressions), and
// iterations remain. Presentation only; never fed back into adaptation.
struct SimpNode;
using SimpPtr = std::shared_ptr<const SimpNode>;

struct SimpNode {
  enum class Kind { Step, Cond, Iter };

  Kind kind = Kind::Step;
  Label dest;          // Step, Iter
  SExprPtr expr;       // Step value; Cond test
  bool flag = false;   // Cond
  bool is_comp = true; // Iter
  Label src;           // Iter
  std::vector<SimpPtr> body;  // Cond body
  std::vector<std::pair<Label, std::vector<SimpPtr>>> entries;  // Iter
};

struct SimplifiedView {
  std::vector<SimpPtr> nodes;
  // Single-expression residue describing how the output was computed from
  // the inputs on this run (not guaranteed valid under changed inputs).
  SExprPtr residue;
};

SimplifiedView simplify(const TracePtr& t);
std::string simplified_to_text(const SimplifiedView& view);

// The label closures underlying the two slicers: everything a backward
// slice from `focus` ends up needing, and everything a forward slice from
// `focus` taints.
LabelSet backward_closure(const TracePtr& t, const LabelSet& focus);
LabelSet forward_closure(const TracePtr& t, const LabelSet& focus);

// True when `small` is `big` with zero or more nodes removed.
bool is_subtrace(const TracePtr& small, const TracePtr& big);

}  // namespace nrct
