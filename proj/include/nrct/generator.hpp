#pragma once

#include <random>
#include <utility>
#include <vector>

#include "nrct/adapt.hpp"
#include "nrct/ast.hpp"
#include "nrct/store.hpp"
#include "nrct/type.hpp"

namespace nrct {

// Random well-typed instances for the property suites (and the `check`
// subcommand). Everything is driven by one seeded engine, so runs are
// reproducible.
class Gen {
 public:
  explicit Gen(unsigned long long seed) : rng_(seed) {}

  int pick(int n);  // uniform in [0, n)
  bool coin(double p = 0.5);
  BigInt small_int();

  TypePtr random_type(int depth);

  // Acyclic store with at most `max_labels` labels, built bottom-up; the
  // returned store type covers the whole domain.
  std::pair<Store, StoreType> random_store(int max_labels);

  // Closed except for store labels; well-typed with type `want`.
  SExprPtr random_expr(const Context& ctx, const TypePtr& want, int depth);

  // A type-preserving edit script against labels the trace does not write:
  // scalar tweaks, record re-pointing, collection resizing, or a row
  // insertion that pre-loads fresh labels.
  EditScript random_edits(const Store& sigma, const StoreType& psi,
                          const LabelSet& forbidden);

 private:
  std::mt19937_64 rng_;
  unsigned long long next_label_ = 0;

  Label fresh_input_label() { return Label("i" + std::to_string(next_label_++)); }
  std::vector<Label> labels_of_type(const Store& s, const StoreType& psi,
                                    const TypePtr& t);
  Constructor random_constructor_of_type(const Store& s, const StoreType& psi,
                                         const TypePtr& t, bool& ok);
};

}  // namespace nrct
