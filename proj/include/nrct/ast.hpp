#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nrct/ints.hpp"
#include "nrct/label.hpp"
#include "nrct/term.hpp"
#include "nrct/type.hpp"

namespace nrct {

struct SurfaceExpr;
using SExprPtr = std::shared_ptr<const SurfaceExpr>;

// Full expression grammar plus the map-comprehension sugar. `For` is the
// monadic bind (the body is collection-typed); `MapComp` is {e | x in e0}
// and desugars to a For over a singleton body.
struct SurfaceExpr {
  enum class Kind {
    Var,
    Lab,
    Let,        // let var = e0 in e1
    RecordLit,  // {A: e, ...}
    Proj,       // e0.field
    IntLit,
    BoolLit,
    Not,    // !e0
    And,    // e0 && e1
    Plus,   // e0 + e1
    Eq,     // e0 == e1
    If,     // if e0 then e1 else e2
    Empty,  // {} : {ann}   (annotation may be absent until typechecking)
    Singleton,  // {e0}
    Union,      // e0 union e1
    For,        // for (var in e0) e1
    MapComp,    // {e1 | var in e0}
    Sum,        // sum (var in e0) e1
    IsEmpty,    // empty(e0)
  };

  Kind kind = Kind::IntLit;
  std::string var;
  Label lab;
  BigInt i;
  bool b = false;
  std::string field;
  TypePtr ann;  // element type of Empty
  std::vector<std::pair<std::string, SExprPtr>> fields;
  SExprPtr e0, e1, e2;
};

SExprPtr mk_surface(SurfaceExpr node);

// Convenience constructors used by tests and the desugarer.
namespace sx {
SExprPtr var(std::string x);
SExprPtr lab(Label l);
SExprPtr let(std::string x, SExprPtr e0, SExprPtr e1);
SExprPtr record(std::vector<std::pair<std::string, SExprPtr>> fs);
SExprPtr proj(SExprPtr e, std::string field);
SExprPtr intlit(BigInt i);
SExprPtr boollit(bool b);
SExprPtr lnot(SExprPtr e);
SExprPtr land(SExprPtr a, SExprPtr b);
SExprPtr plus(SExprPtr a, SExprPtr b);
SExprPtr eq(SExprPtr a, SExprPtr b);
SExprPtr ife(SExprPtr c, SExprPtr t, SExprPtr f);
SExprPtr empty(TypePtr ann);
SExprPtr singleton(SExprPtr e);
SExprPtr unione(SExprPtr a, SExprPtr b);
SExprPtr forin(std::string x, SExprPtr src, SExprPtr body);
SExprPtr mapcomp(std::string x, SExprPtr src, SExprPtr body);
SExprPtr sum(std::string x, SExprPtr src, SExprPtr body);
SExprPtr isempty(SExprPtr e);
}  // namespace sx

struct CoreExpr;
using CExprPtr = std::shared_ptr<const CoreExpr>;

// A-normalized expression: every operator argument is a variable or label.
struct CoreExpr {
  enum class Kind { TermE, Let, If, Proj, Comp, Sum };

  Kind kind = Kind::TermE;
  Term term;          // TermE
  std::string var;    // Let binder; Comp/Sum bound variable
  W w;                // If scrutinee; Proj record; Comp/Sum source
  std::string field;  // Proj field
  CExprPtr e1, e2;    // Let(e1,e2); If(then,else); Comp/Sum body in e1

  static CExprPtr term_e(Term t);
  static CExprPtr let(std::string x, CExprPtr rhs, CExprPtr body);
  static CExprPtr ife(W w, CExprPtr t, CExprPtr f);
  static CExprPtr proj(std::string field, W w);
  static CExprPtr comp(std::string x, W src, CExprPtr body);
  static CExprPtr sum(std::string x, W src, CExprPtr body);
};

bool core_equal(const CExprPtr& a, const CExprPtr& b);

// e[l/x], capture-avoiding because labels cannot be bound.
CExprPtr core_subst(const CExprPtr& e, const std::string& x, const Label& l);

std::set<std::string> free_vars(const CExprPtr& e);
std::set<Label> free_labels(const CExprPtr& e);
std::set<Label> surface_free_labels(const SExprPtr& e);

}  // namespace nrct
