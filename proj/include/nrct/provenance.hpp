#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nrct/ast.hpp"
#include "nrct/eval.hpp"
#include "nrct/semiring.hpp"
#include "nrct/store.hpp"
#include "nrct/trace.hpp"

namespace nrct {

// Where-provenance: an optional source token (absent = no provenance).
using WhereAnn = std::optional<Label>;
// Dependency provenance: a finite token set.
using DepAnn = std::set<Label>;

template <class A>
using AnnMap = std::map<Label, A>;

template <class A>
A ann_get(const AnnMap<A>& h, const Label& l) {
  auto it = h.find(l);
  return it == h.end() ? A{} : it->second;
}

// Identity annotations over a store's domain: where maps l to l, dep maps l
// to {l}.
AnnMap<WhereAnn> identity_where(const Store& sigma);
AnnMap<DepAnn> identity_dep(const Store& sigma);

// where(t, h): copies keep their annotation, everything else gets none.
WhereAnn where_fn(const Term& t, const AnnMap<WhereAnn>& h);
// dep(t, h): the union of the annotations of the labels t mentions.
DepAnn dep_fn(const Term& t, const AnnMap<DepAnn>& h);

// Annotated operational semantics (the extraction oracles). The store
// component matches eval() exactly.
std::pair<Store, AnnMap<WhereAnn>> where_eval(const Store& sigma,
                                              AnnMap<WhereAnn> h,
                                              const Label& dest,
                                              const CExprPtr& e,
                                              FreshSupply& supply);
std::pair<Store, AnnMap<DepAnn>> dep_eval(const Store& sigma, AnnMap<DepAnn> h,
                                          const Label& dest, const CExprPtr& e,
                                          FreshSupply& supply);

// Trace extraction; pure functions of (h, T).
AnnMap<WhereAnn> where_extract(AnnMap<WhereAnn> h, const TracePtr& t);
AnnMap<DepAnn> dep_extract(AnnMap<DepAnn> h, const TracePtr& t);

// True iff T contains a chain of copies from src to dst (n = 0 allowed).
bool chain_of_copies(const TracePtr& t, const Label& src, const Label& dst);

// ---------------------------------------------------------------------------
// Semiring provenance. Annotations attach K-collections to collection
// labels; integer/boolean/record labels carry nothing.

template <class S>
using KAnn = std::optional<KCollection<S>>;

template <class S>
using KAnnMap = AnnMap<KAnn<S>>;

// semiring(t, h).
template <class S>
KAnn<S> semiring_fn(const Term& t, const KAnnMap<S>& h) {
  switch (t.kind) {
    case Term::Kind::Copy:
      return ann_get(h, t.a0.lab);
    case Term::Kind::Empty:
      return k_zero<S>();
    case Term::Kind::Singleton:
      return k_eta<S>(t.a0.lab);
    case Term::Kind::Union: {
      KAnn<S> a = ann_get(h, t.a0.lab);
      KAnn<S> b = ann_get(h, t.a1.lab);
      if (!a || !b)
        internal_error("semiring union: operand lacks a collection annotation");
      return k_add(*a, *b);
    }
    default:
      return std::nullopt;
  }
}

namespace detail {

template <class S>
const KCollection<S>& want_coll_ann(const KAnnMap<S>& h, const Label& l) {
  auto it = h.find(l);
  if (it == h.end() || !it->second)
    internal_error("label " + l.name + " lacks a collection annotation");
  return *it->second;
}

template <class S>
struct KEval {
  FreshSupply& supply;

  struct IterOut {
    Store store;
    LabelMultiset results;
    KAnnMap<S> h;
    KCollection<S> acc;
  };

  std::pair<Store, KAnnMap<S>> run(const Store& sigma, KAnnMap<S> h,
                                   const Label& dest, const CExprPtr& e) {
    switch (e->kind) {
      case CoreExpr::Kind::TermE: {
        Store out = sigma;
        out.bind(dest, op_eval(e->term, sigma));
        h[dest] = semiring_fn<S>(e->term, h);
        return {std::move(out), std::move(h)};
      }
      case CoreExpr::Kind::Let: {
        Label l1 = supply.fresh();
        auto [s1, h1] = run(sigma, std::move(h), l1, e->e1);
        return run(s1, std::move(h1), dest, core_subst(e->e2, e->var, l1));
      }
      case CoreExpr::Kind::If: {
        const Constructor& k = sigma.at(e->w.lab);
        return run(sigma, std::move(h), dest, k.b ? e->e1 : e->e2);
      }
      case CoreExpr::Kind::Proj: {
        const Constructor& k = sigma.at(e->w.lab);
        auto fl = k.field(e->field);
        Store out = sigma;
        out.bind(dest, sigma.at(*fl));
        h[dest] = ann_get(h, *fl);
        return {std::move(out), std::move(h)};
      }
      case CoreExpr::Kind::Comp: {
        IterOut it = iterate(sigma, h, e);
        Store out = it.store;
        out.bind(dest, Constructor::of_coll(flatten(it.store, it.results)));
        KAnnMap<S> hh = std::move(it.h);
        KCollection<S> bound = k_bind<S>(it.acc, [&](const Label& x) {
          return ann_get(hh, x);
        });
        hh[dest] = std::move(bound);
        return {std::move(out), std::move(hh)};
      }
      case CoreExpr::Kind::Sum: {
        // Sums fall outside the semiring model: inner labels still get
        // annotated, the integer result carries nothing.
        IterOut it = iterate(sigma, h, e);
        Store out = it.store;
        out.bind(dest, Constructor::of_int(sum_ints(it.store, it.results)));
        KAnnMap<S> hh = std::move(it.h);
        hh[dest] = std::nullopt;
        return {std::move(out), std::move(hh)};
      }
    }
    internal_error("unhandled core kind");
  }

  IterOut iterate(const Store& sigma, const KAnnMap<S>& h, const CExprPtr& e) {
    const KCollection<S>& k = want_coll_ann<S>(h, e->w.lab);
    const Constructor& src = sigma.at(e->w.lab);
    IterOut out{sigma, {}, h, {}};
    for (const auto& [l, m] : src.coll.entries()) {
      Label dest = supply.fresh();
      auto [s1, h1] = run(sigma, h, dest, core_subst(e->e1, e->var, l));
      out.store = orthogonal_merge(out.store, s1, sigma);
      for (const auto& [nl, ann] : h1)
        if (!h.count(nl)) out.h.emplace(nl, ann);
      LabelMultiset one;
      one.add(dest, m);
      out.results = disjoint_union(out.results, one);
      out.acc = k_add(out.acc, k_scale<S>(k.at(l), k_eta<S>(dest)));
    }
    return out;
  }
};

template <class S>
struct KExtract {
  struct ThetaOut {
    KAnnMap<S> h;
    KCollection<S> acc;
  };

  KAnnMap<S> run(KAnnMap<S> h, const TracePtr& t) {
    switch (t->kind) {
      case Trace::Kind::Assign:
        h[t->dest] = semiring_fn<S>(t->term, h);
        return h;
      case Trace::Kind::Proj:
        h[t->dest] = ann_get(h, t->rec_field);
        return h;
      case Trace::Kind::Seq:
        return run(run(std::move(h), t->t1), t->t2);
      case Trace::Kind::Cond:
        return run(std::move(h), t->sub);
      case Trace::Kind::Comp: {
        ThetaOut out = theta(h, want_coll_ann<S>(h, t->src), t->theta);
        KCollection<S> bound = k_bind<S>(out.acc, [&](const Label& x) {
          return ann_get(out.h, x);
        });
        out.h[t->dest] = std::move(bound);
        return std::move(out.h);
      }
      case Trace::Kind::Sum: {
        // No extraction rule for sums; annotate the inside, give the
        // integer result nothing.
        ThetaOut out = theta(h, want_coll_ann<S>(h, t->src), t->theta);
        out.h[t->dest] = std::nullopt;
        return std::move(out.h);
      }
    }
    internal_error("unhandled trace kind");
  }

  ThetaOut theta(const KAnnMap<S>& h, const KCollection<S>& k,
                 const Theta& entries) {
    ThetaOut out{h, {}};
    for (const ThetaEntry& e : entries) {
      KAnnMap<S> h1 = run(h, e.tr);
      for (const auto& [nl, ann] : h1)
        if (!h.count(nl)) out.h.emplace(nl, ann);
      out.acc =
          k_add(out.acc, k_scale<S>(k.at(e.in), k_eta<S>(trace_out(e.tr))));
    }
    return out;
  }
};

}  // namespace detail

template <class S>
std::pair<Store, KAnnMap<S>> k_eval(const Store& sigma, KAnnMap<S> h,
                                    const Label& dest, const CExprPtr& e,
                                    FreshSupply& supply) {
  detail::KEval<S> ev{supply};
  return ev.run(sigma, std::move(h), dest, e);
}

template <class S>
KAnnMap<S> k_extract(KAnnMap<S> h, const TracePtr& t) {
  detail::KExtract<S> ex;
  return ex.run(std::move(h), t);
}

// Identity-style initial annotation: every collection label maps its
// elements via `leaf` (eta for nat/bool, a fresh indeterminate per element
// for polynomials); other labels carry nothing.
template <class S, class Leaf>
KAnnMap<S> initial_k_annotations(const Store& sigma, Leaf&& leaf) {
  KAnnMap<S> h;
  for (const auto& [l, k] : sigma.cells()) {
    if (k.kind == Constructor::Kind::Coll) {
      KCollection<S> kc;
      for (const auto& [el, m] : k.coll.entries()) kc.add(el, leaf(l, el, m));
      h[l] = std::move(kc);
    } else {
      h[l] = std::nullopt;
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// K-readback: collections become value -> K maps; duplicate element values
// merge by +_K and stored multiplicities are ignored.

template <class S>
struct KValue;
template <class S>
using KValuePtr = std::shared_ptr<const KValue<S>>;

template <class S>
struct KValue {
  enum class Kind { Int, Bool, Record, Coll };
  using K = typename S::K;

  Kind kind = Kind::Int;
  BigInt i;
  bool b = false;
  std::vector<std::pair<std::string, KValuePtr<S>>> fields;
  std::vector<std::pair<KValuePtr<S>, K>> coll;  // sorted, no zero weights
};

template <class S>
int k_value_cmp(const KValuePtr<S>& a, const KValuePtr<S>& b) {
  using KV = KValue<S>;
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  switch (a->kind) {
    case KV::Kind::Int:
      return a->i == b->i ? 0 : (a->i < b->i ? -1 : 1);
    case KV::Kind::Bool:
      return a->b == b->b ? 0 : (a->b < b->b ? -1 : 1);
    case KV::Kind::Record: {
      if (a->fields.size() != b->fields.size())
        return a->fields.size() < b->fields.size() ? -1 : 1;
      for (size_t i = 0; i < a->fields.size(); ++i) {
        if (a->fields[i].first != b->fields[i].first)
          return a->fields[i].first < b->fields[i].first ? -1 : 1;
        if (int c = k_value_cmp<S>(a->fields[i].second, b->fields[i].second))
          return c;
      }
      return 0;
    }
    case KV::Kind::Coll: {
      if (a->coll.size() != b->coll.size())
        return a->coll.size() < b->coll.size() ? -1 : 1;
      for (size_t i = 0; i < a->coll.size(); ++i) {
        if (int c = k_value_cmp<S>(a->coll[i].first, b->coll[i].first))
          return c;
        if (int c = S::cmp(a->coll[i].second, b->coll[i].second)) return c;
      }
      return 0;
    }
  }
  return 0;
}

template <class S>
bool k_value_eq(const KValuePtr<S>& a, const KValuePtr<S>& b) {
  return k_value_cmp<S>(a, b) == 0;
}

template <class S>
KValuePtr<S> k_readback(const Store& sigma, const KAnnMap<S>& h,
                        const TypePtr& tau, const Label& l) {
  auto node = std::make_shared<KValue<S>>();
  const Constructor& k = sigma.at(l);
  switch (tau->kind()) {
    case Type::Kind::Int:
      node->kind = KValue<S>::Kind::Int;
      node->i = k.i;
      break;
    case Type::Kind::Bool:
      node->kind = KValue<S>::Kind::Bool;
      node->b = k.b;
      break;
    case Type::Kind::Record: {
      node->kind = KValue<S>::Kind::Record;
      for (const auto& [f, ft] : tau->fields()) {
        auto fl = k.field(f);
        if (!fl) store_error("k-readback: missing field " + f);
        node->fields.emplace_back(f, k_readback<S>(sigma, h, ft, *fl));
      }
      break;
    }
    case Type::Kind::Coll: {
      node->kind = KValue<S>::Kind::Coll;
      const KCollection<S>& ann = detail::want_coll_ann<S>(h, l);
      std::vector<std::pair<KValuePtr<S>, typename S::K>> elems;
      for (const auto& [el, m] : k.coll.entries())
        elems.emplace_back(k_readback<S>(sigma, h, tau->elem(), el),
                           ann.at(el));
      std::sort(elems.begin(), elems.end(), [](const auto& x, const auto& y) {
        return k_value_cmp<S>(x.first, y.first) < 0;
      });
      for (auto& [v, kk] : elems) {
        if (!node->coll.empty() &&
            k_value_cmp<S>(node->coll.back().first, v) == 0)
          node->coll.back().second = S::add(node->coll.back().second, kk);
        else
          node->coll.emplace_back(v, kk);
      }
      std::erase_if(node->coll,
                    [](const auto& p) { return S::is_zero(p.second); });
      break;
    }
  }
  return node;
}

template <class S>
std::string k_value_show(const KValuePtr<S>& v) {
  using KV = KValue<S>;
  switch (v->kind) {
    case KV::Kind::Int:
      return v->i.str();
    case KV::Kind::Bool:
      return v->b ? "true" : "false";
    case KV::Kind::Record: {
      std::string out = "(";
      bool first = true;
      for (const auto& [f, fv] : v->fields) {
        if (!first) out += ", ";
        first = false;
        out += f + ": " + k_value_show<S>(fv);
      }
      return out + ")";
    }
    case KV::Kind::Coll: {
      std::string out = "{";
      bool first = true;
      for (const auto& [e, k] : v->coll) {
        if (!first) out += ", ";
        first = false;
        out += k_value_show<S>(e) + ": " + S::show(k);
      }
      return out + "}";
    }
  }
  return "?";
}

}  // namespace nrct
