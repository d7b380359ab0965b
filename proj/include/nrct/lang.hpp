#pragma once

#include <string>
#include <utility>

#include "nrct/ast.hpp"
#include "nrct/type.hpp"

namespace nrct {

// Rewrites map comprehensions {e | x in e0} into a bind over a singleton
// body; all other forms are preserved. Idempotent.
SExprPtr desugar(const SExprPtr& e);

// Typechecks and returns the type together with a copy of the expression in
// which every empty-collection literal carries its element type. Bare `{}`
// whose type cannot be inferred from context is an error.
std::pair<TypePtr, SExprPtr> surface_typecheck(const Context& ctx,
                                               const SExprPtr& e);

// Ω ⊢ e : τ for A-normalized expressions. Deterministic; empty-collection
// terms must carry their element annotation.
TypePtr core_typecheck(const Context& ctx, const CExprPtr& e);

// Desugared input -> A-normal core. Binders are alpha-renamed from a
// deterministic supply (v1, v2, ...) that avoids the program's free labels,
// then every operator argument is bound to a variable. Bindings in a
// comprehension or sum body that do not depend on the bound variable are
// floated out in front of the loop, so loop-invariant steps are evaluated
// once.
CExprPtr anormalize(const SExprPtr& e);

// Structural surface -> core conversion for input that is already in
// A-normal form (used by the trace reader and round-trip tests).
CExprPtr core_of_surface_strict(const SExprPtr& e);

}  // namespace nrct
