#include "nrct/lang.hpp"

#include <map>
#include <set>
#include <vector>

#include "nrct/error.hpp"

namespace nrct {

namespace {
using SK = SurfaceExpr::Kind;
}

SExprPtr desugar(const SExprPtr& e) {
  SurfaceExpr out = *e;
  for (auto& [f, fe] : out.fields) fe = desugar(fe);
  if (out.e0) out.e0 = desugar(out.e0);
  if (out.e1) out.e1 = desugar(out.e1);
  if (out.e2) out.e2 = desugar(out.e2);
  if (out.kind == SK::MapComp) {
    // {e | x in e0}  =  for (x in e0) {e}
    return sx::forin(out.var, out.e0, sx::singleton(out.e1));
  }
  return mk_surface(std::move(out));
}

namespace {

// Internal signal: a bare {} reached synthesis position.
struct NeedAnnotation {
  std::string where;
};

struct SurfaceTc {
  std::pair<TypePtr, SExprPtr> synth(const Context& ctx, const SExprPtr& e) {
    switch (e->kind) {
      case SK::Var: {
        TypePtr t = ctx.lookup_var(e->var);
        if (!t) type_error("unbound variable " + e->var);
        return {t, e};
      }
      case SK::Lab: {
        TypePtr t = ctx.lookup_label(e->lab);
        if (!t) type_error("unbound label " + e->lab.name);
        return {t, e};
      }
      case SK::Let: {
        auto [t0, a0] = synth(ctx, e->e0);
        auto [t1, a1] = synth(ctx.extend(e->var, t0), e->e1);
        return {t1, sx::let(e->var, a0, a1)};
      }
      case SK::RecordLit: {
        std::set<std::string> seen;
        std::vector<std::pair<std::string, TypePtr>> fts;
        std::vector<std::pair<std::string, SExprPtr>> afs;
        for (const auto& [f, fe] : e->fields) {
          if (!seen.insert(f).second)
            type_error("duplicate record field " + f);
          auto [ft, af] = synth(ctx, fe);
          fts.emplace_back(f, ft);
          afs.emplace_back(f, af);
        }
        return {Type::record(std::move(fts)), sx::record(std::move(afs))};
      }
      case SK::Proj: {
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_record())
          type_error("projection .  " + e->field + " from a non-record");
        TypePtr ft = t0->field(e->field);
        if (!ft) type_error("record has no field " + e->field);
        return {ft, sx::proj(a0, e->field)};
      }
      case SK::IntLit:
        return {Type::intty(), e};
      case SK::BoolLit:
        return {Type::boolty(), e};
      case SK::Not: {
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_bool()) type_error("! applied to a non-bool");
        return {Type::boolty(), sx::lnot(a0)};
      }
      case SK::And: {
        auto [t0, a0] = synth(ctx, e->e0);
        auto [t1, a1] = synth(ctx, e->e1);
        if (!t0->is_bool() || !t1->is_bool())
          type_error("&& applied to a non-bool");
        return {Type::boolty(), sx::land(a0, a1)};
      }
      case SK::Plus: {
        auto [t0, a0] = synth(ctx, e->e0);
        auto [t1, a1] = synth(ctx, e->e1);
        if (!t0->is_int() || !t1->is_int()) type_error("+ applied to a non-int");
        return {Type::intty(), sx::plus(a0, a1)};
      }
      case SK::Eq: {
        auto [t0, a0] = synth(ctx, e->e0);
        auto [t1, a1] = synth(ctx, e->e1);
        if (!t0->is_int() || !t1->is_int())
          type_error("== compares ints only");
        return {Type::boolty(), sx::eq(a0, a1)};
      }
      case SK::If: {
        auto [tc, ac] = synth(ctx, e->e0);
        if (!tc->is_bool()) type_error("if condition must be bool");
        TypePtr tt;
        SExprPtr at, af;
        try {
          std::tie(tt, at) = synth(ctx, e->e1);
          af = check(ctx, e->e2, tt);
        } catch (const NeedAnnotation&) {
          std::tie(tt, af) = synth(ctx, e->e2);
          at = check(ctx, e->e1, tt);
        }
        return {tt, sx::ife(ac, at, af)};
      }
      case SK::Empty: {
        if (!e->ann) throw NeedAnnotation{"{}"};
        return {Type::coll(e->ann), e};
      }
      case SK::Singleton: {
        auto [t0, a0] = synth(ctx, e->e0);
        return {Type::coll(t0), sx::singleton(a0)};
      }
      case SK::Union: {
        TypePtr t;
        SExprPtr a0, a1;
        try {
          std::tie(t, a0) = synth(ctx, e->e0);
          a1 = check(ctx, e->e1, t);
        } catch (const NeedAnnotation&) {
          std::tie(t, a1) = synth(ctx, e->e1);
          a0 = check(ctx, e->e0, t);
        }
        if (!t->is_coll()) type_error("union applied to a non-collection");
        return {t, sx::unione(a0, a1)};
      }
      case SK::For: {
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_coll()) type_error("for iterates over a collection");
        auto [tb, ab] = synth(ctx.extend(e->var, t0->elem()), e->e1);
        if (!tb->is_coll()) type_error("for body must yield a collection");
        return {tb, sx::forin(e->var, a0, ab)};
      }
      case SK::MapComp: {
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_coll())
          type_error("comprehension iterates over a collection");
        auto [tb, ab] = synth(ctx.extend(e->var, t0->elem()), e->e1);
        return {Type::coll(tb), sx::mapcomp(e->var, a0, ab)};
      }
      case SK::Sum: {
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_coll()) type_error("sum iterates over a collection");
        auto [tb, ab] = synth(ctx.extend(e->var, t0->elem()), e->e1);
        if (!tb->is_int()) type_error("sum body must be int");
        return {Type::intty(), sx::sum(e->var, a0, ab)};
      }
      case SK::IsEmpty: {
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_coll()) type_error("empty() applied to a non-collection");
        return {Type::boolty(), sx::isempty(a0)};
      }
    }
    internal_error("unhandled surface kind");
  }

  SExprPtr check(const Context& ctx, const SExprPtr& e, const TypePtr& want) {
    switch (e->kind) {
      case SK::Empty:
        if (!e->ann) {
          if (!want->is_coll())
            type_error("{} used where a " + to_string(want) + " is expected");
          return sx::empty(want->elem());
        }
        break;
      case SK::Let: {
        auto [t0, a0] = synth(ctx, e->e0);
        SExprPtr a1 = check(ctx.extend(e->var, t0), e->e1, want);
        return sx::let(e->var, a0, a1);
      }
      case SK::If: {
        auto [tc, ac] = synth(ctx, e->e0);
        if (!tc->is_bool()) type_error("if condition must be bool");
        return sx::ife(ac, check(ctx, e->e1, want), check(ctx, e->e2, want));
      }
      case SK::Union: {
        if (!want->is_coll()) type_error("union yields a collection");
        return sx::unione(check(ctx, e->e0, want), check(ctx, e->e1, want));
      }
      case SK::Singleton: {
        if (!want->is_coll())
          type_error("{e} used where a " + to_string(want) + " is expected");
        return sx::singleton(check(ctx, e->e0, want->elem()));
      }
      case SK::For: {
        if (!want->is_coll()) type_error("for yields a collection");
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_coll()) type_error("for iterates over a collection");
        SExprPtr ab = check(ctx.extend(e->var, t0->elem()), e->e1, want);
        return sx::forin(e->var, a0, ab);
      }
      case SK::MapComp: {
        if (!want->is_coll()) type_error("comprehension yields a collection");
        auto [t0, a0] = synth(ctx, e->e0);
        if (!t0->is_coll())
          type_error("comprehension iterates over a collection");
        SExprPtr ab = check(ctx.extend(e->var, t0->elem()), e->e1, want->elem());
        return sx::mapcomp(e->var, a0, ab);
      }
      default:
        break;
    }
    auto [t, a] = synth(ctx, e);
    if (!type_equal(t, want))
      type_error("expected " + to_string(want) + ", found " + to_string(t));
    return a;
  }
};

}  // namespace

std::pair<TypePtr, SExprPtr> surface_typecheck(const Context& ctx,
                                               const SExprPtr& e) {
  SurfaceTc tc;
  try {
    return tc.synth(ctx, e);
  } catch (const NeedAnnotation& n) {
    type_error("empty collection " + n.where + " needs a type annotation");
  }
}

namespace {

TypePtr tc_w(const Context& ctx, const W& w) {
  if (w.is_var()) {
    TypePtr t = ctx.lookup_var(w.var);
    if (!t) type_error("unbound variable " + w.var);
    return t;
  }
  TypePtr t = ctx.lookup_label(w.lab);
  if (!t) type_error("unbound label " + w.lab.name);
  return t;
}

TypePtr tc_term(const Context& ctx, const Term& t) {
  using K = Term::Kind;
  switch (t.kind) {
    case K::IntLit:
      return Type::intty();
    case K::BoolLit:
      return Type::boolty();
    case K::Copy:
      return tc_w(ctx, t.a0);
    case K::Plus: {
      if (!tc_w(ctx, t.a0)->is_int() || !tc_w(ctx, t.a1)->is_int())
        type_error("+ applied to a non-int");
      return Type::intty();
    }
    case K::Eq: {
      if (!tc_w(ctx, t.a0)->is_int() || !tc_w(ctx, t.a1)->is_int())
        type_error("== compares ints only");
      return Type::boolty();
    }
    case K::And: {
      if (!tc_w(ctx, t.a0)->is_bool() || !tc_w(ctx, t.a1)->is_bool())
        type_error("&& applied to a non-bool");
      return Type::boolty();
    }
    case K::Not: {
      if (!tc_w(ctx, t.a0)->is_bool()) type_error("! applied to a non-bool");
      return Type::boolty();
    }
    case K::Record: {
      std::set<std::string> seen;
      std::vector<std::pair<std::string, TypePtr>> fs;
      for (const auto& [f, w] : t.fields) {
        if (!seen.insert(f).second) type_error("duplicate record field " + f);
        fs.emplace_back(f, tc_w(ctx, w));
      }
      return Type::record(std::move(fs));
    }
    case K::Empty:
      if (!t.elem) type_error("empty collection needs a type annotation");
      return Type::coll(t.elem);
    case K::Singleton:
      return Type::coll(tc_w(ctx, t.a0));
    case K::Union: {
      TypePtr a = tc_w(ctx, t.a0);
      TypePtr b = tc_w(ctx, t.a1);
      if (!a->is_coll() || !type_equal(a, b))
        type_error("union of mismatched collections");
      return a;
    }
    case K::IsEmpty:
      if (!tc_w(ctx, t.a0)->is_coll())
        type_error("empty() applied to a non-collection");
      return Type::boolty();
  }
  internal_error("unhandled term kind");
}

}  // namespace

TypePtr core_typecheck(const Context& ctx, const CExprPtr& e) {
  switch (e->kind) {
    case CoreExpr::Kind::TermE:
      return tc_term(ctx, e->term);
    case CoreExpr::Kind::Let: {
      TypePtr t1 = core_typecheck(ctx, e->e1);
      return core_typecheck(ctx.extend(e->var, t1), e->e2);
    }
    case CoreExpr::Kind::If: {
      if (!tc_w(ctx, e->w)->is_bool()) type_error("if condition must be bool");
      TypePtr t = core_typecheck(ctx, e->e1);
      TypePtr f = core_typecheck(ctx, e->e2);
      if (!type_equal(t, f)) type_error("if branches disagree");
      return t;
    }
    case CoreExpr::Kind::Proj: {
      TypePtr t = tc_w(ctx, e->w);
      if (!t->is_record()) type_error("projection from a non-record");
      TypePtr ft = t->field(e->field);
      if (!ft) type_error("record has no field " + e->field);
      return ft;
    }
    case CoreExpr::Kind::Comp: {
      TypePtr src = tc_w(ctx, e->w);
      if (!src->is_coll()) type_error("comprehension source must be a collection");
      TypePtr body = core_typecheck(ctx.extend(e->var, src->elem()), e->e1);
      if (!body->is_coll()) type_error("comprehension body must be a collection");
      return body;
    }
    case CoreExpr::Kind::Sum: {
      TypePtr src = tc_w(ctx, e->w);
      if (!src->is_coll()) type_error("sum source must be a collection");
      TypePtr body = core_typecheck(ctx.extend(e->var, src->elem()), e->e1);
      if (!body->is_int()) type_error("sum body must be int");
      return body;
    }
  }
  internal_error("unhandled core kind");
}

namespace {

// Deterministic binder supply: v1, v2, ...; skips names used by the
// program's free labels so printing stays unambiguous.
struct VarSupply {
  std::set<std::string> avoid;
  unsigned long long next = 1;

  std::string fresh() {
    for (;;) {
      std::string name = "v" + std::to_string(next++);
      if (!avoid.count(name)) return name;
    }
  }
};

SExprPtr alpha_rename(const SExprPtr& e, std::map<std::string, std::string> env,
                      VarSupply& supply) {
  SurfaceExpr out = *e;
  switch (e->kind) {
    case SK::Var: {
      auto it = env.find(e->var);
      if (it == env.end()) type_error("unbound variable " + e->var);
      out.var = it->second;
      break;
    }
    case SK::Let: {
      out.e0 = alpha_rename(e->e0, env, supply);
      std::string nx = supply.fresh();
      env[e->var] = nx;
      out.var = nx;
      out.e1 = alpha_rename(e->e1, env, supply);
      break;
    }
    case SK::For:
    case SK::MapComp:
    case SK::Sum: {
      out.e0 = alpha_rename(e->e0, env, supply);
      std::string nx = supply.fresh();
      env[e->var] = nx;
      out.var = nx;
      out.e1 = alpha_rename(e->e1, env, supply);
      break;
    }
    default: {
      for (auto& [f, fe] : out.fields) fe = alpha_rename(fe, env, supply);
      if (out.e0) out.e0 = alpha_rename(out.e0, env, supply);
      if (out.e1) out.e1 = alpha_rename(out.e1, env, supply);
      if (out.e2) out.e2 = alpha_rename(out.e2, env, supply);
      break;
    }
  }
  return mk_surface(std::move(out));
}

struct Binding {
  std::string var;
  CExprPtr rhs;
};

struct Anf {
  VarSupply& supply;

  CExprPtr wrap(std::vector<Binding> binds, CExprPtr tail) {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
      tail = CoreExpr::let(it->var, it->rhs, tail);
    return tail;
  }

  W atom(const SExprPtr& e, std::vector<Binding>& binds) {
    switch (e->kind) {
      case SK::Var:
        return W::mkvar(e->var);
      case SK::Lab:
        return W::mklab(e->lab);
      case SK::Let: {
        push_flat(binds, e->var, tail(e->e0));
        return atom(e->e1, binds);
      }
      default: {
        CExprPtr t = tail(e);
        // Keep binding chains flat so invariant steps stay visible to the
        // loop hoisting.
        while (t->kind == CoreExpr::Kind::Let) {
          push_flat(binds, t->var, t->e1);
          t = t->e2;
        }
        std::string v = supply.fresh();
        binds.push_back({v, std::move(t)});
        return W::mkvar(v);
      }
    }
  }

  void push_flat(std::vector<Binding>& binds, const std::string& var,
                 CExprPtr rhs) {
    while (rhs->kind == CoreExpr::Kind::Let) {
      push_flat(binds, rhs->var, rhs->e1);
      rhs = rhs->e2;
    }
    binds.push_back({var, std::move(rhs)});
  }

  // Splits nested lets off the front of a normalized body and floats the
  // ones that do not (transitively) depend on `x` in front of the loop.
  std::pair<std::vector<Binding>, CExprPtr> hoist_invariant(
      const std::string& x, CExprPtr body) {
    std::vector<Binding> hoisted;
    std::vector<Binding> kept;
    std::set<std::string> tainted = {x};
    while (body->kind == CoreExpr::Kind::Let) {
      Binding b{body->var, body->e1};
      auto fv = free_vars(b.rhs);
      bool depends = false;
      for (const auto& v : fv)
        if (tainted.count(v)) depends = true;
      if (depends) {
        tainted.insert(b.var);
        kept.push_back(std::move(b));
      } else {
        hoisted.push_back(std::move(b));
      }
      body = body->e2;
    }
    return {std::move(hoisted), wrap(std::move(kept), std::move(body))};
  }

  CExprPtr tail(const SExprPtr& e) {
    std::vector<Binding> binds;
    CExprPtr out = tail_inner(e, binds);
    return wrap(std::move(binds), std::move(out));
  }

  CExprPtr tail_inner(const SExprPtr& e, std::vector<Binding>& binds) {
    switch (e->kind) {
      case SK::Var:
        return CoreExpr::term_e(Term::copy(W::mkvar(e->var)));
      case SK::Lab:
        return CoreExpr::term_e(Term::copy(W::mklab(e->lab)));
      case SK::Let: {
        binds.push_back({e->var, tail(e->e0)});
        return tail_inner(e->e1, binds);
      }
      case SK::RecordLit: {
        std::vector<std::pair<std::string, W>> fs;
        for (const auto& [f, fe] : e->fields)
          fs.emplace_back(f, atom(fe, binds));
        return CoreExpr::term_e(Term::record(std::move(fs)));
      }
      case SK::Proj:
        return CoreExpr::proj(e->field, atom(e->e0, binds));
      case SK::IntLit:
        return CoreExpr::term_e(Term::int_lit(e->i));
      case SK::BoolLit:
        return CoreExpr::term_e(Term::bool_lit(e->b));
      case SK::Not:
        return CoreExpr::term_e(Term::logical_not(atom(e->e0, binds)));
      case SK::And: {
        W a = atom(e->e0, binds);
        W b = atom(e->e1, binds);
        return CoreExpr::term_e(Term::logical_and(a, b));
      }
      case SK::Plus: {
        W a = atom(e->e0, binds);
        W b = atom(e->e1, binds);
        return CoreExpr::term_e(Term::plus(a, b));
      }
      case SK::Eq: {
        W a = atom(e->e0, binds);
        W b = atom(e->e1, binds);
        return CoreExpr::term_e(Term::eq(a, b));
      }
      case SK::If: {
        W c = atom(e->e0, binds);
        return CoreExpr::ife(c, tail(e->e1), tail(e->e2));
      }
      case SK::Empty:
        return CoreExpr::term_e(Term::empty(e->ann));
      case SK::Singleton:
        return CoreExpr::term_e(Term::singleton(atom(e->e0, binds)));
      case SK::Union: {
        W a = atom(e->e0, binds);
        W b = atom(e->e1, binds);
        return CoreExpr::term_e(Term::set_union(a, b));
      }
      case SK::For:
      case SK::Sum: {
        W src = atom(e->e0, binds);
        auto [hoisted, body] = hoist_invariant(e->var, tail(e->e1));
        for (auto& b : hoisted) binds.push_back(std::move(b));
        return e->kind == SK::For ? CoreExpr::comp(e->var, src, body)
                                  : CoreExpr::sum(e->var, src, body);
      }
      case SK::MapComp:
        internal_error("anormalize: input not desugared");
      case SK::IsEmpty:
        return CoreExpr::term_e(Term::is_empty(atom(e->e0, binds)));
    }
    internal_error("unhandled surface kind");
  }
};

}  // namespace

CExprPtr anormalize(const SExprPtr& e) {
  VarSupply supply;
  for (const Label& l : surface_free_labels(e)) supply.avoid.insert(l.name);
  SExprPtr renamed = alpha_rename(e, {}, supply);
  Anf anf{supply};
  return anf.tail(renamed);
}

CExprPtr core_of_surface_strict(const SExprPtr& e) {
  auto as_w = [](const SExprPtr& a) -> W {
    if (a->kind == SK::Var) return W::mkvar(a->var);
    if (a->kind == SK::Lab) return W::mklab(a->lab);
    type_error("expression is not in A-normal form");
  };
  switch (e->kind) {
    case SK::Var:
    case SK::Lab:
      return CoreExpr::term_e(Term::copy(as_w(e)));
    case SK::Let:
      return CoreExpr::let(e->var, core_of_surface_strict(e->e0),
                           core_of_surface_strict(e->e1));
    case SK::RecordLit: {
      std::vector<std::pair<std::string, W>> fs;
      for (const auto& [f, fe] : e->fields) fs.emplace_back(f, as_w(fe));
      return CoreExpr::term_e(Term::record(std::move(fs)));
    }
    case SK::Proj:
      return CoreExpr::proj(e->field, as_w(e->e0));
    case SK::IntLit:
      return CoreExpr::term_e(Term::int_lit(e->i));
    case SK::BoolLit:
      return CoreExpr::term_e(Term::bool_lit(e->b));
    case SK::Not:
      return CoreExpr::term_e(Term::logical_not(as_w(e->e0)));
    case SK::And:
      return CoreExpr::term_e(Term::logical_and(as_w(e->e0), as_w(e->e1)));
    case SK::Plus:
      return CoreExpr::term_e(Term::plus(as_w(e->e0), as_w(e->e1)));
    case SK::Eq:
      return CoreExpr::term_e(Term::eq(as_w(e->e0), as_w(e->e1)));
    case SK::If:
      return CoreExpr::ife(as_w(e->e0), core_of_surface_strict(e->e1),
                           core_of_surface_strict(e->e2));
    case SK::Empty:
      return CoreExpr::term_e(Term::empty(e->ann));
    case SK::Singleton:
      return CoreExpr::term_e(Term::singleton(as_w(e->e0)));
    case SK::Union:
      return CoreExpr::term_e(Term::set_union(as_w(e->e0), as_w(e->e1)));
    case SK::For:
      return CoreExpr::comp(e->var, as_w(e->e0), core_of_surface_strict(e->e1));
    case SK::Sum:
      return CoreExpr::sum(e->var, as_w(e->e0), core_of_surface_strict(e->e1));
    case SK::MapComp:
      type_error("comprehension sugar is not A-normal");
    case SK::IsEmpty:
      return CoreExpr::term_e(Term::is_empty(as_w(e->e0)));
  }
  internal_error("unhandled surface kind");
}

}  // namespace nrct
