#include "nrct/eval.hpp"

#include <vector>

#include "nrct/error.hpp"

namespace nrct {

ValuePtr ValueEnv::lookup_var(const std::string& x) const {
  auto it = vars.find(x);
  if (it == vars.end()) internal_error("denote: unbound variable " + x);
  return it->second;
}

ValuePtr ValueEnv::lookup_label(const Label& l) const {
  auto it = labels.find(l);
  if (it == labels.end()) internal_error("denote: unbound label " + l.name);
  return it->second;
}

ValueEnv ValueEnv::bind(const std::string& x, ValuePtr v) const {
  ValueEnv out = *this;
  out.vars[x] = std::move(v);
  return out;
}

ValuePtr denote(const SExprPtr& e, const ValueEnv& gamma) {
  using K = SurfaceExpr::Kind;
  switch (e->kind) {
    case K::Var:
      return gamma.lookup_var(e->var);
    case K::Lab:
      return gamma.lookup_label(e->lab);
    case K::Let:
      return denote(e->e1, gamma.bind(e->var, denote(e->e0, gamma)));
    case K::RecordLit: {
      std::vector<std::pair<std::string, ValuePtr>> fs;
      for (const auto& [f, fe] : e->fields)
        fs.emplace_back(f, denote(fe, gamma));
      return Value::record(std::move(fs));
    }
    case K::Proj: {
      ValuePtr r = denote(e->e0, gamma);
      ValuePtr f = r->field(e->field);
      if (!f) internal_error("denote: missing field " + e->field);
      return f;
    }
    case K::IntLit:
      return Value::of_int(e->i);
    case K::BoolLit:
      return Value::of_bool(e->b);
    case K::Not:
      return Value::of_bool(!denote(e->e0, gamma)->boolval());
    case K::And:
      return Value::of_bool(denote(e->e0, gamma)->boolval() &&
                            denote(e->e1, gamma)->boolval());
    case K::Plus:
      return Value::of_int(denote(e->e0, gamma)->intval() +
                           denote(e->e1, gamma)->intval());
    case K::Eq:
      return Value::of_bool(denote(e->e0, gamma)->intval() ==
                            denote(e->e1, gamma)->intval());
    case K::If:
      return denote(e->e0, gamma)->boolval() ? denote(e->e1, gamma)
                                             : denote(e->e2, gamma);
    case K::Empty:
      return Value::bag_of({});
    case K::Singleton:
      return Value::bag_of({{denote(e->e0, gamma), 1}});
    case K::Union: {
      ValuePtr a = denote(e->e0, gamma);
      ValuePtr b = denote(e->e1, gamma);
      std::vector<std::pair<ValuePtr, BigInt>> elems = a->bag();
      for (const auto& [v, m] : b->bag()) elems.emplace_back(v, m);
      return Value::bag_of(std::move(elems));
    }
    case K::For: {
      ValuePtr src = denote(e->e0, gamma);
      std::vector<std::pair<ValuePtr, BigInt>> elems;
      for (const auto& [v, m] : src->bag()) {
        ValuePtr sub = denote(e->e1, gamma.bind(e->var, v));
        for (const auto& [sv, sm] : sub->bag()) elems.emplace_back(sv, m * sm);
      }
      return Value::bag_of(std::move(elems));
    }
    case K::MapComp: {
      ValuePtr src = denote(e->e0, gamma);
      std::vector<std::pair<ValuePtr, BigInt>> elems;
      for (const auto& [v, m] : src->bag())
        elems.emplace_back(denote(e->e1, gamma.bind(e->var, v)), m);
      return Value::bag_of(std::move(elems));
    }
    case K::Sum: {
      ValuePtr src = denote(e->e0, gamma);
      BigInt total = 0;
      for (const auto& [v, m] : src->bag())
        total += denote(e->e1, gamma.bind(e->var, v))->intval() * m;
      return Value::of_int(total);
    }
    case K::IsEmpty:
      return Value::of_bool(denote(e->e0, gamma)->bag().empty());
  }
  internal_error("unhandled surface kind");
}

namespace {

const Label& want_label(const W& w) {
  if (!w.is_lab()) internal_error("eval: unsubstituted variable " + w.var);
  return w.lab;
}

struct Evaluator {
  FreshSupply& supply;

  Store run(const Store& sigma, const Label& dest, const CExprPtr& e) {
    switch (e->kind) {
      case CoreExpr::Kind::TermE: {
        Store out = sigma;
        out.bind(dest, op_eval(e->term, sigma));
        return out;
      }
      case CoreExpr::Kind::Let: {
        Label l1 = supply.fresh();
        Store s1 = run(sigma, l1, e->e1);
        return run(s1, dest, core_subst(e->e2, e->var, l1));
      }
      case CoreExpr::Kind::If: {
        const Constructor& k = sigma.at(want_label(e->w));
        if (k.kind != Constructor::Kind::Bool)
          internal_error("eval: if scrutinee is not a bool");
        return run(sigma, dest, k.b ? e->e1 : e->e2);
      }
      case CoreExpr::Kind::Proj: {
        const Constructor& k = sigma.at(want_label(e->w));
        if (k.kind != Constructor::Kind::Record)
          internal_error("eval: projection from a non-record");
        auto fl = k.field(e->field);
        if (!fl) internal_error("eval: record has no field " + e->field);
        Store out = sigma;
        out.bind(dest, sigma.at(*fl));
        return out;
      }
      case CoreExpr::Kind::Comp: {
        auto [merged, results] = iterate(sigma, e->var, e->e1, e->w);
        Store out = merged;
        out.bind(dest, Constructor::of_coll(flatten(merged, results)));
        return out;
      }
      case CoreExpr::Kind::Sum: {
        auto [merged, results] = iterate(sigma, e->var, e->e1, e->w);
        Store out = merged;
        out.bind(dest, Constructor::of_int(sum_ints(merged, results)));
        return out;
      }
    }
    internal_error("unhandled core kind");
  }

  // sigma, x in L |- e  =>  sigma', L'. Each element is evaluated against
  // the base store and the results are combined with the orthogonal merge,
  // in ascending label order.
  std::pair<Store, LabelMultiset> iterate(const Store& sigma,
                                          const std::string& x,
                                          const CExprPtr& body, const W& src) {
    const Constructor& k = sigma.at(want_label(src));
    if (k.kind != Constructor::Kind::Coll)
      internal_error("eval: iteration source is not a collection");
    LabelMultiset source = k.coll;

    Store merged = sigma;
    LabelMultiset results;
    for (const auto& [l, m] : source.entries()) {
      Label dest = supply.fresh();
      Store sub = run(sigma, dest, core_subst(body, x, l));
      merged = orthogonal_merge(merged, sub, sigma);
      results = disjoint_union(results, [&] {
        LabelMultiset one;
        one.add(dest, m);
        return one;
      }());
    }
    return {std::move(merged), std::move(results)};
  }
};

}  // namespace

Store eval(const Store& sigma, const Label& dest, const CExprPtr& e,
           FreshSupply& supply) {
  Evaluator ev{supply};
  return ev.run(sigma, dest, e);
}

}  // namespace nrct
