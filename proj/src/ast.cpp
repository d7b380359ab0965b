#include "nrct/ast.hpp"

namespace nrct {

SExprPtr mk_surface(SurfaceExpr node) {
  return std::make_shared<const SurfaceExpr>(std::move(node));
}

namespace sx {

using K = SurfaceExpr::Kind;

static SurfaceExpr node(K k) {
  SurfaceExpr e;
  e.kind = k;
  return e;
}

SExprPtr var(std::string x) {
  auto e = node(K::Var);
  e.var = std::move(x);
  return mk_surface(std::move(e));
}
SExprPtr lab(Label l) {
  auto e = node(K::Lab);
  e.lab = std::move(l);
  return mk_surface(std::move(e));
}
SExprPtr let(std::string x, SExprPtr e0, SExprPtr e1) {
  auto e = node(K::Let);
  e.var = std::move(x);
  e.e0 = std::move(e0);
  e.e1 = std::move(e1);
  return mk_surface(std::move(e));
}
SExprPtr record(std::vector<std::pair<std::string, SExprPtr>> fs) {
  auto e = node(K::RecordLit);
  e.fields = std::move(fs);
  return mk_surface(std::move(e));
}
SExprPtr proj(SExprPtr b, std::string field) {
  auto e = node(K::Proj);
  e.e0 = std::move(b);
  e.field = std::move(field);
  return mk_surface(std::move(e));
}
SExprPtr intlit(BigInt i) {
  auto e = node(K::IntLit);
  e.i = std::move(i);
  return mk_surface(std::move(e));
}
SExprPtr boollit(bool b) {
  auto e = node(K::BoolLit);
  e.b = b;
  return mk_surface(std::move(e));
}
SExprPtr lnot(SExprPtr x) {
  auto e = node(K::Not);
  e.e0 = std::move(x);
  return mk_surface(std::move(e));
}
static SExprPtr binop(K k, SExprPtr a, SExprPtr b) {
  auto e = node(k);
  e.e0 = std::move(a);
  e.e1 = std::move(b);
  return mk_surface(std::move(e));
}
SExprPtr land(SExprPtr a, SExprPtr b) { return binop(K::And, std::move(a), std::move(b)); }
SExprPtr plus(SExprPtr a, SExprPtr b) { return binop(K::Plus, std::move(a), std::move(b)); }
SExprPtr eq(SExprPtr a, SExprPtr b) { return binop(K::Eq, std::move(a), std::move(b)); }
SExprPtr unione(SExprPtr a, SExprPtr b) { return binop(K::Union, std::move(a), std::move(b)); }
SExprPtr ife(SExprPtr c, SExprPtr t, SExprPtr f) {
  auto e = node(K::If);
  e.e0 = std::move(c);
  e.e1 = std::move(t);
  e.e2 = std::move(f);
  return mk_surface(std::move(e));
}
SExprPtr empty(TypePtr ann) {
  auto e = node(K::Empty);
  e.ann = std::move(ann);
  return mk_surface(std::move(e));
}
SExprPtr singleton(SExprPtr x) {
  auto e = node(K::Singleton);
  e.e0 = std::move(x);
  return mk_surface(std::move(e));
}
static SExprPtr binder(K k, std::string x, SExprPtr src, SExprPtr body) {
  auto e = node(k);
  e.var = std::move(x);
  e.e0 = std::move(src);
  e.e1 = std::move(body);
  return mk_surface(std::move(e));
}
SExprPtr forin(std::string x, SExprPtr src, SExprPtr body) {
  return binder(K::For, std::move(x), std::move(src), std::move(body));
}
SExprPtr mapcomp(std::string x, SExprPtr src, SExprPtr body) {
  return binder(K::MapComp, std::move(x), std::move(src), std::move(body));
}
SExprPtr sum(std::string x, SExprPtr src, SExprPtr body) {
  return binder(K::Sum, std::move(x), std::move(src), std::move(body));
}
SExprPtr isempty(SExprPtr x) {
  auto e = node(K::IsEmpty);
  e.e0 = std::move(x);
  return mk_surface(std::move(e));
}

}  // namespace sx

CExprPtr CoreExpr::term_e(Term t) {
  CoreExpr e;
  e.kind = Kind::TermE;
  e.term = std::move(t);
  return std::make_shared<const CoreExpr>(std::move(e));
}

CExprPtr CoreExpr::let(std::string x, CExprPtr rhs, CExprPtr body) {
  CoreExpr e;
  e.kind = Kind::Let;
  e.var = std::move(x);
  e.e1 = std::move(rhs);
  e.e2 = std::move(body);
  return std::make_shared<const CoreExpr>(std::move(e));
}

CExprPtr CoreExpr::ife(W w, CExprPtr t, CExprPtr f) {
  CoreExpr e;
  e.kind = Kind::If;
  e.w = std::move(w);
  e.e1 = std::move(t);
  e.e2 = std::move(f);
  return std::make_shared<const CoreExpr>(std::move(e));
}

CExprPtr CoreExpr::proj(std::string field, W w) {
  CoreExpr e;
  e.kind = Kind::Proj;
  e.field = std::move(field);
  e.w = std::move(w);
  return std::make_shared<const CoreExpr>(std::move(e));
}

static CExprPtr iter(CoreExpr::Kind k, std::string x, W src, CExprPtr body) {
  CoreExpr e;
  e.kind = k;
  e.var = std::move(x);
  e.w = std::move(src);
  e.e1 = std::move(body);
  return std::make_shared<const CoreExpr>(std::move(e));
}

CExprPtr CoreExpr::comp(std::string x, W src, CExprPtr body) {
  return iter(Kind::Comp, std::move(x), std::move(src), std::move(body));
}

CExprPtr CoreExpr::sum(std::string x, W src, CExprPtr body) {
  return iter(Kind::Sum, std::move(x), std::move(src), std::move(body));
}

bool core_equal(const CExprPtr& a, const CExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case CoreExpr::Kind::TermE:
      return term_equal(a->term, b->term);
    case CoreExpr::Kind::Let:
      return a->var == b->var && core_equal(a->e1, b->e1) &&
             core_equal(a->e2, b->e2);
    case CoreExpr::Kind::If:
      return a->w == b->w && core_equal(a->e1, b->e1) &&
             core_equal(a->e2, b->e2);
    case CoreExpr::Kind::Proj:
      return a->field == b->field && a->w == b->w;
    case CoreExpr::Kind::Comp:
    case CoreExpr::Kind::Sum:
      return a->var == b->var && a->w == b->w && core_equal(a->e1, b->e1);
  }
  return false;
}

CExprPtr core_subst(const CExprPtr& e, const std::string& x, const Label& l) {
  auto subw = [&](const W& w) {
    return (w.is_var() && w.var == x) ? W::mklab(l) : w;
  };
  switch (e->kind) {
    case CoreExpr::Kind::TermE:
      return CoreExpr::term_e(term_subst(e->term, x, l));
    case CoreExpr::Kind::Let: {
      CExprPtr rhs = core_subst(e->e1, x, l);
      // Shadowing binder: stop in the body.
      CExprPtr body = (e->var == x) ? e->e2 : core_subst(e->e2, x, l);
      return CoreExpr::let(e->var, std::move(rhs), std::move(body));
    }
    case CoreExpr::Kind::If:
      return CoreExpr::ife(subw(e->w), core_subst(e->e1, x, l),
                           core_subst(e->e2, x, l));
    case CoreExpr::Kind::Proj:
      return CoreExpr::proj(e->field, subw(e->w));
    case CoreExpr::Kind::Comp:
    case CoreExpr::Kind::Sum: {
      CExprPtr body = (e->var == x) ? e->e1 : core_subst(e->e1, x, l);
      W src = subw(e->w);
      return e->kind == CoreExpr::Kind::Comp
                 ? CoreExpr::comp(e->var, std::move(src), std::move(body))
                 : CoreExpr::sum(e->var, std::move(src), std::move(body));
    }
  }
  return e;
}

namespace {

void collect_vars(const CExprPtr& e, std::set<std::string> bound,
                  std::set<std::string>& out) {
  auto addw = [&](const W& w) {
    if (w.is_var() && !bound.count(w.var)) out.insert(w.var);
  };
  switch (e->kind) {
    case CoreExpr::Kind::TermE:
      for (const W& w : e->term.atoms()) addw(w);
      break;
    case CoreExpr::Kind::Let: {
      collect_vars(e->e1, bound, out);
      bound.insert(e->var);
      collect_vars(e->e2, bound, out);
      break;
    }
    case CoreExpr::Kind::If:
      addw(e->w);
      collect_vars(e->e1, bound, out);
      collect_vars(e->e2, bound, out);
      break;
    case CoreExpr::Kind::Proj:
      addw(e->w);
      break;
    case CoreExpr::Kind::Comp:
    case CoreExpr::Kind::Sum: {
      addw(e->w);
      bound.insert(e->var);
      collect_vars(e->e1, bound, out);
      break;
    }
  }
}

void collect_labels(const CExprPtr& e, std::set<Label>& out) {
  auto addw = [&](const W& w) {
    if (w.is_lab()) out.insert(w.lab);
  };
  switch (e->kind) {
    case CoreExpr::Kind::TermE:
      for (const W& w : e->term.atoms()) addw(w);
      break;
    case CoreExpr::Kind::Let:
      collect_labels(e->e1, out);
      collect_labels(e->e2, out);
      break;
    case CoreExpr::Kind::If:
      addw(e->w);
      collect_labels(e->e1, out);
      collect_labels(e->e2, out);
      break;
    case CoreExpr::Kind::Proj:
      addw(e->w);
      break;
    case CoreExpr::Kind::Comp:
    case CoreExpr::Kind::Sum:
      addw(e->w);
      collect_labels(e->e1, out);
      break;
  }
}

void collect_surface_labels(const SExprPtr& e, std::set<Label>& out) {
  if (!e) return;
  if (e->kind == SurfaceExpr::Kind::Lab) out.insert(e->lab);
  for (const auto& [f, fe] : e->fields) collect_surface_labels(fe, out);
  collect_surface_labels(e->e0, out);
  collect_surface_labels(e->e1, out);
  collect_surface_labels(e->e2, out);
}

}  // namespace

std::set<std::string> free_vars(const CExprPtr& e) {
  std::set<std::string> out;
  collect_vars(e, {}, out);
  return out;
}

std::set<Label> free_labels(const CExprPtr& e) {
  std::set<Label> out;
  collect_labels(e, out);
  return out;
}

std::set<Label> surface_free_labels(const SExprPtr& e) {
  std::set<Label> out;
  collect_surface_labels(e, out);
  return out;
}

}  // namespace nrct
