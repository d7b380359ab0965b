#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrct/ints.hpp"
#include "nrct/label.hpp"
#include "nrct/type.hpp"

namespace nrct {

// Atom of an A-normal expression: a variable or a label. Evaluation
// substitutes labels for variables, so terms reaching the store or a trace
// are label-only.
struct W {
  enum class Kind { Var, Lab };
  Kind kind = Kind::Lab;
  std::string var;
  Label lab;

  static W mkvar(std::string x) {
    W w;
    w.kind = Kind::Var;
    w.var = std::move(x);
    return w;
  }
  static W mklab(Label l) {
    W w;
    w.kind = Kind::Lab;
    w.lab = std::move(l);
    return w;
  }
  bool is_var() const { return kind == Kind::Var; }
  bool is_lab() const { return kind == Kind::Lab; }

  bool operator==(const W& o) const {
    if (kind != o.kind) return false;
    return is_var() ? var == o.var : lab == o.lab;
  }
};

// One computation step: a constant, a copy of a label, or a constructor or
// primitive applied to atoms.
struct Term {
  enum class Kind {
    IntLit,
    BoolLit,
    Plus,
    Eq,
    And,
    Not,
    Record,
    Copy,
    Empty,
    Singleton,
    Union,
    IsEmpty,
  };

  Kind kind = Kind::IntLit;
  BigInt i;
  bool b = false;
  W a0, a1;
  std::vector<std::pair<std::string, W>> fields;
  TypePtr elem;  // element type of Empty; may be null on parsed-back traces

  static Term int_lit(BigInt v);
  static Term bool_lit(bool v);
  static Term plus(W x, W y);
  static Term eq(W x, W y);
  static Term logical_and(W x, W y);
  static Term logical_not(W x);
  static Term record(std::vector<std::pair<std::string, W>> fs);
  static Term copy(W x);
  static Term empty(TypePtr elem_type);
  static Term singleton(W x);
  static Term set_union(W x, W y);
  static Term is_empty(W x);

  // Atoms mentioned by the term, in argument order.
  std::vector<W> atoms() const;
  // Labels mentioned; all atoms must be labels.
  std::vector<Label> arg_labels() const;
  bool all_labels() const;
};

bool term_equal(const Term& a, const Term& b);

// Substitutes label `l` for variable `x`.
Term term_subst(const Term& t, const std::string& x, const Label& l);

}  // namespace nrct
