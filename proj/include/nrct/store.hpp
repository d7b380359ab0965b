#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrct/ints.hpp"
#include "nrct/label.hpp"
#include "nrct/term.hpp"
#include "nrct/type.hpp"
#include "nrct/value.hpp"

namespace nrct {

// Multiset of labels; multiplicities are always >= 1.
class LabelMultiset {
 public:
  LabelMultiset() = default;

  void add(const Label& l, BigInt m);
  const std::map<Label, BigInt>& entries() const { return m_; }
  bool empty() const { return m_.empty(); }
  bool contains(const Label& l) const { return m_.count(l) != 0; }
  BigInt multiplicity(const Label& l) const;
  bool operator==(const LabelMultiset&) const = default;

 private:
  std::map<Label, BigInt> m_;
};

// M ⊔ N: pointwise-added multiplicities.
LabelMultiset multiset_union(const LabelMultiset& m, const LabelMultiset& n);
// M ⊕ N: defined only for disjoint domains.
LabelMultiset disjoint_union(const LabelMultiset& m, const LabelMultiset& n);
// m · L: scalar multiplication.
LabelMultiset multiset_scale(const BigInt& m, const LabelMultiset& l);

std::string to_string(const LabelMultiset& m);

// One heap cell: an integer, boolean, record of labels, or label multiset.
struct Constructor {
  enum class Kind { Int, Bool, Record, Coll };

  Kind kind = Kind::Int;
  BigInt i;
  bool b = false;
  std::vector<std::pair<std::string, Label>> fields;
  LabelMultiset coll;

  static Constructor of_int(BigInt v);
  static Constructor of_bool(bool v);
  static Constructor of_record(std::vector<std::pair<std::string, Label>> fs);
  static Constructor of_coll(LabelMultiset ls);

  std::optional<Label> field(const std::string& name) const;
  std::vector<Label> mentioned_labels() const;
  bool operator==(const Constructor&) const = default;
};

std::string to_string(const Constructor& k);

// A finite map from labels to constructors. Evaluation never rebinds a
// label (`bind` enforces this); trace adaptation overwrites labels it
// rewrites via `rebind`.
class Store {
 public:
  Store() = default;

  bool contains(const Label& l) const { return m_.count(l) != 0; }
  const Constructor& at(const Label& l) const;
  void bind(const Label& l, Constructor k);
  void rebind(const Label& l, Constructor k);
  size_t size() const { return m_.size(); }
  const std::map<Label, Constructor>& cells() const { return m_; }
  bool operator==(const Store&) const = default;

  // True when `ext` binds everything this store binds, identically.
  bool extends(const Store& base) const;

 private:
  std::map<Label, Constructor> m_;
};

// σ1 ⊎_σ σ2 for orthogonal extensions of `base`.
Store orthogonal_merge(const Store& s1, const Store& s2, const Store& base);

// op(t, σ): the one-step table. All term atoms must be labels.
Constructor op_eval(const Term& t, const Store& sigma);

// True iff ⊢ σ : Ψ is derivable: the domains agree, every cell has the
// stated type, and the store is acyclic. On failure `diag` (when given)
// names the offending label.
bool store_typecheck(const StoreType& psi, const Store& sigma,
                     std::string* diag = nullptr);

// Infers the store type of σ, or fails (cycles, dangling labels,
// heterogeneous collections). Empty collections take their type from
// `hints` when present, defaulting to {int}.
std::optional<StoreType> infer_store_type(const Store& sigma,
                                          const StoreType& hints = {},
                                          std::string* diag = nullptr);

// σ ↑_τ l: the label-free value at l.
ValuePtr readback(const Store& sigma, const TypePtr& tau, const Label& l);
// Type-directed readback with inference for convenience.
ValuePtr readback_infer(const Store& sigma, const Label& l);

// σ[L]: the constructor multiset, preserving multiplicities.
std::vector<std::pair<Constructor, BigInt>> store_slice(
    const Store& sigma, const LabelMultiset& l);

// ⨆: scalar-multiplied multiset union of a collection-of-collections.
LabelMultiset flatten(const Store& sigma, const LabelMultiset& l);
// Σ: weighted sum of a collection of integers.
BigInt sum_ints(const Store& sigma, const LabelMultiset& l);

}  // namespace nrct
