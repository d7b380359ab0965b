#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nrct/generator.hpp"

namespace nrct {

// One randomized instance shared by the property suites: a store, a
// well-typed program over it, and the compiled core form.
struct Instance {
  Store store;
  StoreType psi;
  SExprPtr surface;  // annotated
  CExprPtr core;
  TypePtr type;
  Label dest{"out"};
};

// want_coll forces a collection-typed result (the semiring suite).
Instance random_instance(Gen& g, int depth, int max_labels,
                         bool want_coll = false);

struct PropertyResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::string first_failure;
  bool ok() const { return passed == total; }
};

PropertyResult prop_consistency(unsigned long long seed, int count);
PropertyResult prop_fidelity(unsigned long long seed, int count);
PropertyResult prop_extract_where(unsigned long long seed, int count);
PropertyResult prop_extract_dep(unsigned long long seed, int count);
PropertyResult prop_extract_semiring(unsigned long long seed, int count);
PropertyResult prop_denotational_agreement(unsigned long long seed, int count);
PropertyResult prop_eval_store_agreement(unsigned long long seed, int count);
PropertyResult prop_roundtrip(unsigned long long seed, int count);
PropertyResult prop_typecheck_mutation(unsigned long long seed, int count);
PropertyResult prop_adapt_stability(unsigned long long seed, int count);
PropertyResult prop_where_copy_chains(unsigned long long seed, int count);
PropertyResult prop_bag_semantics(unsigned long long seed, int count);
PropertyResult prop_semiring_laws_nat(unsigned long long seed, int count);
PropertyResult prop_semiring_laws_bool(unsigned long long seed, int count);
PropertyResult prop_semiring_laws_poly(unsigned long long seed, int count);
PropertyResult prop_slice_sufficiency(unsigned long long seed, int count);
PropertyResult prop_slice_monotone(unsigned long long seed, int count);
PropertyResult prop_slice_duality(unsigned long long seed, int count);
PropertyResult prop_slice_extraction(unsigned long long seed, int count);

// Runs the full suite, prints one line per property, returns 0 when all
// pass.
int run_property_suite(unsigned long long seed, int count);

}  // namespace nrct
