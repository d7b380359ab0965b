#include "nrct/provenance.hpp"

#include "nrct/error.hpp"

namespace nrct {

AnnMap<WhereAnn> identity_where(const Store& sigma) {
  AnnMap<WhereAnn> h;
  for (const auto& [l, k] : sigma.cells()) h[l] = l;
  return h;
}

AnnMap<DepAnn> identity_dep(const Store& sigma) {
  AnnMap<DepAnn> h;
  for (const auto& [l, k] : sigma.cells()) h[l] = DepAnn{l};
  return h;
}

WhereAnn where_fn(const Term& t, const AnnMap<WhereAnn>& h) {
  if (t.kind == Term::Kind::Copy) return ann_get(h, t.a0.lab);
  return std::nullopt;
}

DepAnn dep_fn(const Term& t, const AnnMap<DepAnn>& h) {
  DepAnn out;
  for (const Label& l : t.arg_labels()) {
    DepAnn a = ann_get(h, l);
    out.insert(a.begin(), a.end());
  }
  return out;
}

namespace {

// Merges annotations produced by independent iteration branches: new
// bindings only, mirroring the orthogonal store merge.
template <class A>
void ann_extend(AnnMap<A>& into, const AnnMap<A>& base, const AnnMap<A>& sub) {
  for (const auto& [l, a] : sub)
    if (!base.count(l)) into[l] = a;
}

struct WhereEval {
  FreshSupply& supply;

  std::pair<Store, AnnMap<WhereAnn>> run(const Store& sigma,
                                         AnnMap<WhereAnn> h, const Label& dest,
                                         const CExprPtr& e) {
    switch (e->kind) {
      case CoreExpr::Kind::TermE: {
        Store out = sigma;
        out.bind(dest, op_eval(e->term, sigma));
        h[dest] = where_fn(e->term, h);
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
      case CoreExpr::Kind::Comp:
      case CoreExpr::Kind::Sum: {
        const Constructor& src = sigma.at(e->w.lab);
        Store merged = sigma;
        AnnMap<WhereAnn> hh = h;
        LabelMultiset results;
        for (const auto& [l, m] : src.coll.entries()) {
          Label d = supply.fresh();
          auto [s1, h1] = run(sigma, h, d, core_subst(e->e1, e->var, l));
          merged = orthogonal_merge(merged, s1, sigma);
          ann_extend(hh, h, h1);
          LabelMultiset one;
          one.add(d, m);
          results = disjoint_union(results, one);
        }
        Store out = merged;
        if (e->kind == CoreExpr::Kind::Comp)
          out.bind(dest, Constructor::of_coll(flatten(merged, results)));
        else
          out.bind(dest, Constructor::of_int(sum_ints(merged, results)));
        hh[dest] = std::nullopt;
        return {std::move(out), std::move(hh)};
      }
    }
    internal_error("unhandled core kind");
  }
};

struct DepEval {
  FreshSupply& supply;

  struct IterOut {
    Store store;
    LabelMultiset results;
    AnnMap<DepAnn> h;
    DepAnn acc;
  };

  std::pair<Store, AnnMap<DepAnn>> run(const Store& sigma, AnnMap<DepAnn> h,
                                       const Label& dest, const CExprPtr& e) {
    switch (e->kind) {
      case CoreExpr::Kind::TermE: {
        Store out = sigma;
        out.bind(dest, op_eval(e->term, sigma));
        h[dest] = dep_fn(e->term, h);
        return {std::move(out), std::move(h)};
      }
      case CoreExpr::Kind::Let: {
        Label l1 = supply.fresh();
        auto [s1, h1] = run(sigma, std::move(h), l1, e->e1);
        return run(s1, std::move(h1), dest, core_subst(e->e2, e->var, l1));
      }
      case CoreExpr::Kind::If: {
        // The result picks up the test's annotation.
        const Constructor& k = sigma.at(e->w.lab);
        auto [s1, h1] = run(sigma, std::move(h), dest, k.b ? e->e1 : e->e2);
        DepAnn test = ann_get(h1, e->w.lab);
        h1[dest].insert(test.begin(), test.end());
        return {std::move(s1), std::move(h1)};
      }
      case CoreExpr::Kind::Proj: {
        const Constructor& k = sigma.at(e->w.lab);
        auto fl = k.field(e->field);
        Store out = sigma;
        out.bind(dest, sigma.at(*fl));
        DepAnn a = ann_get(h, *fl);
        DepAnn rec = ann_get(h, e->w.lab);
        a.insert(rec.begin(), rec.end());
        h[dest] = std::move(a);
        return {std::move(out), std::move(h)};
      }
      case CoreExpr::Kind::Comp:
      case CoreExpr::Kind::Sum: {
        IterOut it = iterate(sigma, h, e);
        Store out = it.store;
        if (e->kind == CoreExpr::Kind::Comp)
          out.bind(dest, Constructor::of_coll(flatten(it.store, it.results)));
        else
          out.bind(dest, Constructor::of_int(sum_ints(it.store, it.results)));
        AnnMap<DepAnn> hh = std::move(it.h);
        DepAnn a = ann_get(hh, e->w.lab);
        a.insert(it.acc.begin(), it.acc.end());
        hh[dest] = std::move(a);
        return {std::move(out), std::move(hh)};
      }
    }
    internal_error("unhandled core kind");
  }

  IterOut iterate(const Store& sigma, const AnnMap<DepAnn>& h,
                  const CExprPtr& e) {
    const Constructor& src = sigma.at(e->w.lab);
    IterOut out{sigma, {}, h, {}};
    for (const auto& [l, m] : src.coll.entries()) {
      Label d = supply.fresh();
      auto [s1, h1] = run(sigma, h, d, core_subst(e->e1, e->var, l));
      out.store = orthogonal_merge(out.store, s1, sigma);
      ann_extend(out.h, h, h1);
      DepAnn elem = ann_get(h1, d);
      out.acc.insert(elem.begin(), elem.end());
      LabelMultiset one;
      one.add(d, m);
      out.results = disjoint_union(out.results, one);
    }
    return out;
  }
};

}  // namespace

std::pair<Store, AnnMap<WhereAnn>> where_eval(const Store& sigma,
                                              AnnMap<WhereAnn> h,
                                              const Label& dest,
                                              const CExprPtr& e,
                                              FreshSupply& supply) {
  WhereEval ev{supply};
  return ev.run(sigma, std::move(h), dest, e);
}

std::pair<Store, AnnMap<DepAnn>> dep_eval(const Store& sigma, AnnMap<DepAnn> h,
                                          const Label& dest, const CExprPtr& e,
                                          FreshSupply& supply) {
  DepEval ev{supply};
  return ev.run(sigma, std::move(h), dest, e);
}

AnnMap<WhereAnn> where_extract(AnnMap<WhereAnn> h, const TracePtr& t) {
  switch (t->kind) {
    case Trace::Kind::Assign:
      h[t->dest] = where_fn(t->term, h);
      return h;
    case Trace::Kind::Proj:
      h[t->dest] = ann_get(h, t->rec_field);
      return h;
    case Trace::Kind::Seq:
      return where_extract(where_extract(std::move(h), t->t1), t->t2);
    case Trace::Kind::Cond:
      return where_extract(std::move(h), t->sub);
    case Trace::Kind::Comp:
    case Trace::Kind::Sum: {
      AnnMap<WhereAnn> hh = h;
      for (const ThetaEntry& e : t->theta) {
        AnnMap<WhereAnn> h1 = where_extract(h, e.tr);
        for (const auto& [l, a] : h1)
          if (!h.count(l)) hh[l] = a;
      }
      hh[t->dest] = std::nullopt;
      return hh;
    }
  }
  internal_error("unhandled trace kind");
}

namespace {

struct DepThetaOut {
  AnnMap<DepAnn> h;
  DepAnn acc;
};

AnnMap<DepAnn> dep_extract_impl(AnnMap<DepAnn> h, const TracePtr& t);

DepThetaOut dep_theta(const AnnMap<DepAnn>& h, const Theta& entries) {
  DepThetaOut out{h, {}};
  for (const ThetaEntry& e : entries) {
    AnnMap<DepAnn> h1 = dep_extract_impl(h, e.tr);
    for (const auto& [l, a] : h1)
      if (!h.count(l)) out.h[l] = a;
    DepAnn elem = ann_get(h1, trace_out(e.tr));
    out.acc.insert(elem.begin(), elem.end());
  }
  return out;
}

AnnMap<DepAnn> dep_extract_impl(AnnMap<DepAnn> h, const TracePtr& t) {
  switch (t->kind) {
    case Trace::Kind::Assign:
      h[t->dest] = dep_fn(t->term, h);
      return h;
    case Trace::Kind::Proj: {
      DepAnn a = ann_get(h, t->rec_field);
      DepAnn rec = ann_get(h, t->rec);
      a.insert(rec.begin(), rec.end());
      h[t->dest] = std::move(a);
      return h;
    }
    case Trace::Kind::Seq:
      return dep_extract_impl(dep_extract_impl(std::move(h), t->t1), t->t2);
    case Trace::Kind::Cond: {
      AnnMap<DepAnn> h1 = dep_extract_impl(std::move(h), t->sub);
      Label dest = trace_out(t->sub);
      DepAnn test = ann_get(h1, t->test);
      h1[dest].insert(test.begin(), test.end());
      return h1;
    }
    case Trace::Kind::Comp:
    case Trace::Kind::Sum: {
      DepThetaOut out = dep_theta(h, t->theta);
      DepAnn a = ann_get(out.h, t->src);
      a.insert(out.acc.begin(), out.acc.end());
      out.h[t->dest] = std::move(a);
      return std::move(out.h);
    }
  }
  internal_error("unhandled trace kind");
}

}  // namespace

AnnMap<DepAnn> dep_extract(AnnMap<DepAnn> h, const TracePtr& t) {
  return dep_extract_impl(std::move(h), t);
}

namespace {

// Copy edges: dest <- src for copy assignments and projections.
void copy_edges(const TracePtr& t,
                std::multimap<Label, Label>& rev /* dst -> src */) {
  switch (t->kind) {
    case Trace::Kind::Assign:
      if (t->term.kind == Term::Kind::Copy)
        rev.emplace(t->dest, t->term.a0.lab);
      break;
    case Trace::Kind::Proj:
      rev.emplace(t->dest, t->rec_field);
      break;
    case Trace::Kind::Seq:
      copy_edges(t->t1, rev);
      copy_edges(t->t2, rev);
      break;
    case Trace::Kind::Cond:
      copy_edges(t->sub, rev);
      break;
    case Trace::Kind::Comp:
    case Trace::Kind::Sum:
      for (const ThetaEntry& e : t->theta) copy_edges(e.tr, rev);
      break;
  }
}

}  // namespace

bool chain_of_copies(const TracePtr& t, const Label& src, const Label& dst) {
  if (src == dst) return true;  // empty chain
  std::multimap<Label, Label> rev;
  copy_edges(t, rev);
  // Walk backwards from dst; copy targets are written once, so this is a
  // simple chain rather than a general search.
  std::set<Label> seen;
  std::vector<Label> frontier = {dst};
  while (!frontier.empty()) {
    Label cur = frontier.back();
    frontier.pop_back();
    if (!seen.insert(cur).second) continue;
    auto [lo, hi] = rev.equal_range(cur);
    for (auto it = lo; it != hi; ++it) {
      if (it->second == src) return true;
      frontier.push_back(it->second);
    }
  }
  return false;
}

}  // namespace nrct
