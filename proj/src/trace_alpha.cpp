#include <map>
#include <optional>
#include <vector>

#include "nrct/trace.hpp"

namespace nrct {

namespace {

// Incrementally built bijections on labels (fixing the frontier pointwise)
// and on bound variable names.
struct Matcher {
  const LabelSet& frontier;
  bool compare_exprs;
  std::map<Label, Label> fwd, bwd;
  std::map<std::string, std::string> vfwd, vbwd;

  bool labels(const Label& a, const Label& b) {
    auto fa = fwd.find(a);
    if (fa != fwd.end()) return fa->second == b;
    if (bwd.count(b)) return false;
    if (frontier.count(a) || frontier.count(b)) {
      if (a != b) return false;
    }
    fwd[a] = b;
    bwd[b] = a;
    return true;
  }

  // The image of `a` must already be determined: mapped earlier or fixed by
  // the frontier. Theta keys are always resolvable this way because source
  // elements are written (or are inputs) before the iteration runs.
  std::optional<Label> resolve(const Label& a) const {
    auto it = fwd.find(a);
    if (it != fwd.end()) return it->second;
    if (frontier.count(a)) return a;
    return std::nullopt;
  }

  bool vars(const std::string& a, const std::string& b) {
    auto fa = vfwd.find(a);
    if (fa != vfwd.end()) return fa->second == b;
    if (vbwd.count(b)) return false;
    vfwd[a] = b;
    vbwd[b] = a;
    return true;
  }

  bool atoms(const W& a, const W& b) {
    if (a.kind != b.kind) return false;
    return a.is_var() ? vars(a.var, b.var) : labels(a.lab, b.lab);
  }

  bool terms(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Term::Kind::IntLit:
        return a.i == b.i;
      case Term::Kind::BoolLit:
        return a.b == b.b;
      case Term::Kind::Empty:
        return true;
      case Term::Kind::Record: {
        if (a.fields.size() != b.fields.size()) return false;
        for (size_t i = 0; i < a.fields.size(); ++i) {
          if (a.fields[i].first != b.fields[i].first) return false;
          if (!atoms(a.fields[i].second, b.fields[i].second)) return false;
        }
        return true;
      }
      default: {
        auto aa = a.atoms();
        auto bb = b.atoms();
        if (aa.size() != bb.size()) return false;
        for (size_t i = 0; i < aa.size(); ++i)
          if (!atoms(aa[i], bb[i])) return false;
        return true;
      }
    }
  }

  bool exprs(const CExprPtr& a, const CExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case CoreExpr::Kind::TermE:
        return terms(a->term, b->term);
      case CoreExpr::Kind::Let:
        return exprs(a->e1, b->e1) && vars(a->var, b->var) &&
               exprs(a->e2, b->e2);
      case CoreExpr::Kind::If:
        return atoms(a->w, b->w) && exprs(a->e1, b->e1) && exprs(a->e2, b->e2);
      case CoreExpr::Kind::Proj:
        return a->field == b->field && atoms(a->w, b->w);
      case CoreExpr::Kind::Comp:
      case CoreExpr::Kind::Sum:
        return atoms(a->w, b->w) && vars(a->var, b->var) &&
               exprs(a->e1, b->e1);
    }
    return false;
  }

  static void flatten(const TracePtr& t, std::vector<TracePtr>& out) {
    if (t->kind == Trace::Kind::Seq) {
      flatten(t->t1, out);
      flatten(t->t2, out);
    } else {
      out.push_back(t);
    }
  }

  // Sequencing is compared flattened: ';' is associative.
  bool traces(const TracePtr& a, const TracePtr& b) {
    std::vector<TracePtr> sa, sb;
    flatten(a, sa);
    flatten(b, sb);
    if (sa.size() != sb.size()) return false;
    for (size_t i = 0; i < sa.size(); ++i)
      if (!step(sa[i], sb[i])) return false;
    return true;
  }

  bool step(const TracePtr& a, const TracePtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Trace::Kind::Assign:
        return terms(a->term, b->term) && labels(a->dest, b->dest);
      case Trace::Kind::Proj:
        return a->field == b->field && labels(a->rec, b->rec) &&
               labels(a->rec_field, b->rec_field) && labels(a->dest, b->dest);
      case Trace::Kind::Seq:
        return traces(a, b);
      case Trace::Kind::Cond: {
        if (a->flag != b->flag) return false;
        if (!labels(a->test, b->test)) return false;
        if (!traces(a->sub, b->sub)) return false;
        if (compare_exprs) {
          if (!exprs(a->e_then, b->e_then)) return false;
          if (!exprs(a->e_else, b->e_else)) return false;
        }
        return true;
      }
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        if (!labels(a->src, b->src)) return false;
        if (a->theta.size() != b->theta.size()) return false;
        std::map<Label, const ThetaEntry*> bents;
        for (const auto& e : b->theta) bents[e.in] = &e;
        for (const auto& ea : a->theta) {
          auto key = resolve(ea.in);
          if (!key) return false;
          auto it = bents.find(*key);
          if (it == bents.end()) return false;
          const ThetaEntry& eb = *it->second;
          if (ea.mult != eb.mult) return false;
          if (!traces(ea.tr, eb.tr)) return false;
        }
        if (compare_exprs) {
          if (!vars(a->var, b->var)) return false;
          if (!exprs(a->body, b->body)) return false;
        }
        return labels(a->dest, b->dest);
      }
    }
    return false;
  }
};

}  // namespace

bool trace_alpha_eq(const TracePtr& a, const TracePtr& b,
                    const LabelSet& frontier, bool compare_exprs) {
  Matcher m{frontier, compare_exprs, {}, {}, {}, {}};
  return m.traces(a, b);
}

std::optional<std::map<Label, Label>> trace_alpha_match(const TracePtr& a,
                                                        const TracePtr& b,
                                                        const LabelSet& frontier,
                                                        bool compare_exprs) {
  Matcher m{frontier, compare_exprs, {}, {}, {}, {}};
  if (!m.traces(a, b)) return std::nullopt;
  return m.fwd;
}

namespace {

Label rename_label(const std::map<Label, Label>& m, const Label& l) {
  auto it = m.find(l);
  return it == m.end() ? l : it->second;
}

W rename_w(const std::map<Label, Label>& m, const W& w) {
  return w.is_lab() ? W::mklab(rename_label(m, w.lab)) : w;
}

Term rename_term(const std::map<Label, Label>& m, const Term& t) {
  Term out = t;
  out.a0 = rename_w(m, out.a0);
  out.a1 = rename_w(m, out.a1);
  for (auto& [f, w] : out.fields) w = rename_w(m, w);
  return out;
}

CExprPtr rename_expr(const std::map<Label, Label>& m, const CExprPtr& e) {
  if (!e) return e;
  switch (e->kind) {
    case CoreExpr::Kind::TermE:
      return CoreExpr::term_e(rename_term(m, e->term));
    case CoreExpr::Kind::Let:
      return CoreExpr::let(e->var, rename_expr(m, e->e1),
                           rename_expr(m, e->e2));
    case CoreExpr::Kind::If:
      return CoreExpr::ife(rename_w(m, e->w), rename_expr(m, e->e1),
                           rename_expr(m, e->e2));
    case CoreExpr::Kind::Proj:
      return CoreExpr::proj(e->field, rename_w(m, e->w));
    case CoreExpr::Kind::Comp:
      return CoreExpr::comp(e->var, rename_w(m, e->w), rename_expr(m, e->e1));
    case CoreExpr::Kind::Sum:
      return CoreExpr::sum(e->var, rename_w(m, e->w), rename_expr(m, e->e1));
  }
  return e;
}

}  // namespace

TracePtr trace_rename(const TracePtr& t, const std::map<Label, Label>& m) {
  switch (t->kind) {
    case Trace::Kind::Assign:
      return Trace::assign(rename_label(m, t->dest), rename_term(m, t->term));
    case Trace::Kind::Proj:
      return Trace::proj(rename_label(m, t->dest), t->field,
                         rename_label(m, t->rec),
                         rename_label(m, t->rec_field));
    case Trace::Kind::Seq:
      return Trace::seq(trace_rename(t->t1, m), trace_rename(t->t2, m));
    case Trace::Kind::Cond:
      return Trace::cond(rename_label(m, t->test), t->flag,
                         trace_rename(t->sub, m), rename_expr(m, t->e_then),
                         rename_expr(m, t->e_else));
    case Trace::Kind::Comp:
    case Trace::Kind::Sum: {
      Theta theta;
      for (const ThetaEntry& e : t->theta)
        theta.push_back(
            {rename_label(m, e.in), trace_rename(e.tr, m), e.mult});
      return t->kind == Trace::Kind::Comp
                 ? Trace::comp(rename_label(m, t->dest),
                               rename_label(m, t->src), std::move(theta),
                               t->var, rename_expr(m, t->body))
                 : Trace::sum(rename_label(m, t->dest),
                              rename_label(m, t->src), std::move(theta),
                              t->var, rename_expr(m, t->body));
    }
  }
  return t;
}

}  // namespace nrct
