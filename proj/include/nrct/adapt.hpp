#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nrct/json_io.hpp"
#include "nrct/store.hpp"
#include "nrct/trace.hpp"

namespace nrct {

// sigma matches psi avoiding S: some store type extending psi types sigma,
// and sigma's domain is disjoint from S.
bool matches_avoiding(const Store& sigma, const StoreType& psi,
                      const LabelSet& avoid, std::string* diag = nullptr);

// Whole-constructor replacements applied to an input store. Labels absent
// from the store are added (row insertion pre-loads the new element
// labels).
struct Edit {
  Label label;
  Constructor value;
};
using EditScript = std::vector<Edit>;

EditScript edit_script_from_json(const Json& j);
Store apply_edits(const Store& sigma, const EditScript& edits);

// Validates an edit script against the trace it will be replayed on: the
// edited store must still match the input store's type away from Wr(T).
void check_edits_legal(const Store& original, const Store& edited,
                       const TracePtr& trace);

// Recomputes T on sigma: assignments are re-run, conditionals re-use their
// subtrace while the test still matches and re-evaluate the recorded other
// branch otherwise, and iterations re-run over the current source contents,
// re-using cached subtraces by input label.
std::pair<Store, TracePtr> adapt(const Store& sigma, const TracePtr& t,
                                 FreshSupply& supply);

struct FidelityReport {
  bool pass = false;
  bool values_equal = false;
  bool traces_equal = false;
  std::string detail;  // counterexample dump on failure
};

// Runs e on sigma1, applies the edits, adapts the trace, and compares
// against from-scratch traced evaluation on the edited store: values must
// be equal and traces alpha-equivalent on the input frontier.
FidelityReport run_fidelity_check(const CExprPtr& e, const Store& sigma1,
                                  const EditScript& edits, const Label& dest);

}  // namespace nrct
