#pragma once

#include <map>
#include <string>

#include "nrct/ast.hpp"
#include "nrct/store.hpp"
#include "nrct/value.hpp"

namespace nrct {

// Environment for the denotational evaluator. Free labels are treated like
// variables bound to their (label-free) values, so the oracle never touches
// a store.
struct ValueEnv {
  std::map<std::string, ValuePtr> vars;
  std::map<Label, ValuePtr> labels;

  ValuePtr lookup_var(const std::string& x) const;
  ValuePtr lookup_label(const Label& l) const;
  ValueEnv bind(const std::string& x, ValuePtr v) const;
};

// Reference denotational semantics; handles the comprehension sugar
// directly so the desugarer can be checked against it.
ValuePtr denote(const SExprPtr& e, const ValueEnv& gamma);

// Destination-passing operational semantics (untraced): extends sigma with
// dest bound to the result of e. Well-typed input cannot fail; kind
// mismatches raise internal errors.
Store eval(const Store& sigma, const Label& dest, const CExprPtr& e,
           FreshSupply& supply);

}  // namespace nrct
