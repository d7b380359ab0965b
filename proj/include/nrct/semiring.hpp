#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrct/error.hpp"
#include "nrct/ints.hpp"
#include "nrct/label.hpp"

namespace nrct {

// Commutative semiring instances. Each provides the carrier K with 0, 1,
// +, *, and decidable canonical equality.

struct NatSemiring {
  using K = BigInt;
  static K zero() { return 0; }
  static K one() { return 1; }
  static K add(const K& a, const K& b) { return a + b; }
  static K mul(const K& a, const K& b) { return a * b; }
  static bool is_zero(const K& a) { return a == 0; }
  static bool eq(const K& a, const K& b) { return a == b; }
  static int cmp(const K& a, const K& b) { return a < b ? -1 : (a == b ? 0 : 1); }
  static std::string show(const K& a) { return a.str(); }
  static constexpr const char* name = "nat";
};

struct BoolSemiring {
  using K = bool;
  static K zero() { return false; }
  static K one() { return true; }
  static K add(K a, K b) { return a || b; }
  static K mul(K a, K b) { return a && b; }
  static bool is_zero(K a) { return !a; }
  static bool eq(K a, K b) { return a == b; }
  static int cmp(K a, K b) { return a == b ? 0 : (a < b ? -1 : 1); }
  static std::string show(K a) { return a ? "true" : "false"; }
  static constexpr const char* name = "bool";
};

// A monomial maps indeterminate names to positive powers.
using Monomial = std::map<std::string, unsigned>;

// N[X]: polynomials with natural coefficients in canonical form (sorted
// monomials, no zero coefficients). Equality is structural.
class Poly {
 public:
  Poly() = default;

  static Poly zero() { return Poly(); }
  static Poly constant(BigInt c) {
    Poly p;
    if (c != 0) p.terms_[Monomial{}] = std::move(c);
    return p;
  }
  static Poly var(const std::string& x) {
    Poly p;
    p.terms_[Monomial{{x, 1}}] = 1;
    return p;
  }

  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b.terms_) {
      auto [it, inserted] = out.terms_.emplace(m, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
    return out;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        for (const auto& [x, p] : mb) m[x] += p;
        out.terms_[m] += ca * cb;
      }
    }
    for (auto it = out.terms_.begin(); it != out.terms_.end();)
      it = it->second == 0 ? out.terms_.erase(it) : std::next(it);
    return out;
  }

  bool operator==(const Poly&) const = default;
  auto operator<=>(const Poly& o) const { return terms_ <=> o.terms_; }

  std::string show() const;

 private:
  std::map<Monomial, BigInt> terms_;
};

struct PolySemiring {
  using K = Poly;
  static K zero() { return Poly::zero(); }
  static K one() { return Poly::constant(1); }
  static K add(const K& a, const K& b) { return a + b; }
  static K mul(const K& a, const K& b) { return a * b; }
  static bool is_zero(const K& a) { return a.is_zero(); }
  static bool eq(const K& a, const K& b) { return a == b; }
  static int cmp(const K& a, const K& b) {
    auto c = a <=> b;
    return c < 0 ? -1 : (c == 0 ? 0 : 1);
  }
  static std::string show(const K& a) { return a.show(); }
  static constexpr const char* name = "poly";
};

// Finitely-supported Label -> K map; the stored keys are exactly the
// support (no explicit zeros).
template <class S>
class KCollection {
 public:
  using K = typename S::K;

  KCollection() = default;

  static KCollection from(std::vector<std::pair<Label, K>> entries) {
    KCollection out;
    for (auto& [l, k] : entries) out.add(l, k);
    return out;
  }

  K at(const Label& l) const {
    auto it = m_.find(l);
    return it == m_.end() ? S::zero() : it->second;
  }

  void add(const Label& l, const K& k) {
    if (S::is_zero(k)) return;
    auto [it, inserted] = m_.emplace(l, k);
    if (!inserted) {
      it->second = S::add(it->second, k);
      if (S::is_zero(it->second)) m_.erase(it);
    }
  }

  const std::map<Label, K>& support() const { return m_; }
  bool operator==(const KCollection&) const = default;

 private:
  std::map<Label, K> m_;
};

// eta_K(x) = [x -> 1]
template <class S>
KCollection<S> k_eta(const Label& l) {
  KCollection<S> out;
  out.add(l, S::one());
  return out;
}

template <class S>
KCollection<S> k_zero() {
  return {};
}

// f +_K g, pointwise.
template <class S>
KCollection<S> k_add(const KCollection<S>& f, const KCollection<S>& g) {
  KCollection<S> out = f;
  for (const auto& [l, k] : g.support()) out.add(l, k);
  return out;
}

// k ._K f: scalar multiplication.
template <class S>
KCollection<S> k_scale(const typename S::K& k, const KCollection<S>& f) {
  KCollection<S> out;
  for (const auto& [l, v] : f.support()) out.add(l, S::mul(k, v));
  return out;
}

// f ._K g = \y. sum_{x in supp(f)} f(x) * g(x)(y). Every x in the support
// must be mapped by g to a K-collection.
template <class S, class Lookup>
KCollection<S> k_bind(const KCollection<S>& f, Lookup&& g) {
  KCollection<S> out;
  for (const auto& [x, fx] : f.support()) {
    const std::optional<KCollection<S>>& gx = g(x);
    if (!gx)
      internal_error("semiring bind: " + x.name +
                     " carries no collection annotation");
    for (const auto& [y, gy] : gx->support()) out.add(y, S::mul(fx, gy));
  }
  return out;
}

}  // namespace nrct
