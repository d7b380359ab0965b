#include "nrct/trace.hpp"

#include <algorithm>
#include <map>

#include "nrct/error.hpp"
#include "nrct/lang.hpp"

namespace nrct {

TracePtr Trace::assign(Label dest, Term t) {
  Trace tr;
  tr.kind = Kind::Assign;
  tr.dest = std::move(dest);
  tr.term = std::move(t);
  return std::make_shared<const Trace>(std::move(tr));
}

TracePtr Trace::proj(Label dest, std::string field, Label rec,
                     Label rec_field) {
  Trace tr;
  tr.kind = Kind::Proj;
  tr.dest = std::move(dest);
  tr.field = std::move(field);
  tr.rec = std::move(rec);
  tr.rec_field = std::move(rec_field);
  return std::make_shared<const Trace>(std::move(tr));
}

TracePtr Trace::seq(TracePtr a, TracePtr b) {
  Trace tr;
  tr.kind = Kind::Seq;
  tr.t1 = std::move(a);
  tr.t2 = std::move(b);
  return std::make_shared<const Trace>(std::move(tr));
}

TracePtr Trace::cond(Label test, bool flag, TracePtr sub, CExprPtr e_then,
                     CExprPtr e_else) {
  Trace tr;
  tr.kind = Kind::Cond;
  tr.test = std::move(test);
  tr.flag = flag;
  tr.sub = std::move(sub);
  tr.e_then = std::move(e_then);
  tr.e_else = std::move(e_else);
  return std::make_shared<const Trace>(std::move(tr));
}

static TracePtr iter_trace(Trace::Kind k, Label dest, Label src, Theta theta,
                           std::string var, CExprPtr body) {
  Trace tr;
  tr.kind = k;
  tr.dest = std::move(dest);
  tr.src = std::move(src);
  tr.theta = std::move(theta);
  tr.var = std::move(var);
  tr.body = std::move(body);
  std::sort(tr.theta.begin(), tr.theta.end(),
            [](const ThetaEntry& a, const ThetaEntry& b) { return a.in < b.in; });
  for (size_t i = 1; i < tr.theta.size(); ++i)
    if (tr.theta[i - 1].in == tr.theta[i].in)
      internal_error("labeled trace set has duplicate input label " +
                     tr.theta[i].in.name);
  return std::make_shared<const Trace>(std::move(tr));
}

TracePtr Trace::comp(Label dest, Label src, Theta theta, std::string var,
                     CExprPtr body) {
  return iter_trace(Kind::Comp, std::move(dest), std::move(src),
                    std::move(theta), std::move(var), std::move(body));
}

TracePtr Trace::sum(Label dest, Label src, Theta theta, std::string var,
                    CExprPtr body) {
  return iter_trace(Kind::Sum, std::move(dest), std::move(src),
                    std::move(theta), std::move(var), std::move(body));
}

Label trace_out(const TracePtr& t) {
  switch (t->kind) {
    case Trace::Kind::Assign:
    case Trace::Kind::Proj:
    case Trace::Kind::Comp:
    case Trace::Kind::Sum:
      return t->dest;
    case Trace::Kind::Seq:
      return trace_out(t->t2);
    case Trace::Kind::Cond:
      return trace_out(t->sub);
  }
  internal_error("unhandled trace kind");
}

LabelMultiset in_star(const Theta& theta) {
  LabelMultiset out;
  for (const auto& e : theta) out.add(e.in, e.mult);
  return out;
}

LabelMultiset out_star(const Theta& theta) {
  LabelMultiset out;
  for (const auto& e : theta) out.add(trace_out(e.tr), e.mult);
  return out;
}

namespace {

void collect_written(const TracePtr& t, LabelSet& out) {
  switch (t->kind) {
    case Trace::Kind::Assign:
    case Trace::Kind::Proj:
      out.insert(t->dest);
      break;
    case Trace::Kind::Seq:
      collect_written(t->t1, out);
      collect_written(t->t2, out);
      break;
    case Trace::Kind::Cond:
      out.insert(trace_out(t->sub));
      collect_written(t->sub, out);
      break;
    case Trace::Kind::Comp:
    case Trace::Kind::Sum:
      out.insert(t->dest);
      for (const auto& e : t->theta) collect_written(e.tr, out);
      break;
  }
}

void collect_mentioned(const TracePtr& t, LabelSet& out) {
  auto add_expr = [&out](const CExprPtr& e) {
    if (!e) return;
    for (const Label& l : free_labels(e)) out.insert(l);
  };
  switch (t->kind) {
    case Trace::Kind::Assign:
      out.insert(t->dest);
      for (const Label& l : t->term.arg_labels()) out.insert(l);
      break;
    case Trace::Kind::Proj:
      out.insert(t->dest);
      out.insert(t->rec);
      out.insert(t->rec_field);
      break;
    case Trace::Kind::Seq:
      collect_mentioned(t->t1, out);
      collect_mentioned(t->t2, out);
      break;
    case Trace::Kind::Cond:
      out.insert(t->test);
      collect_mentioned(t->sub, out);
      add_expr(t->e_then);
      add_expr(t->e_else);
      break;
    case Trace::Kind::Comp:
    case Trace::Kind::Sum:
      out.insert(t->dest);
      out.insert(t->src);
      for (const auto& e : t->theta) {
        out.insert(e.in);
        collect_mentioned(e.tr, out);
      }
      add_expr(t->body);
      break;
  }
}

}  // namespace

LabelSet written_labels(const TracePtr& t) {
  LabelSet out;
  collect_written(t, out);
  return out;
}

LabelSet mentioned_labels(const TracePtr& t) {
  LabelSet out;
  collect_mentioned(t, out);
  return out;
}

namespace {

const Label& want_label(const W& w) {
  if (!w.is_lab()) internal_error("traced eval: unsubstituted variable " + w.var);
  return w.lab;
}

struct TracedEvaluator {
  FreshSupply& supply;

  std::pair<Store, TracePtr> run(const Store& sigma, const Label& dest,
                                 const CExprPtr& e) {
    switch (e->kind) {
      case CoreExpr::Kind::TermE: {
        Store out = sigma;
        out.bind(dest, op_eval(e->term, sigma));
        return {std::move(out), Trace::assign(dest, e->term)};
      }
      case CoreExpr::Kind::Let: {
        Label l1 = supply.fresh();
        auto [s1, t1] = run(sigma, l1, e->e1);
        auto [s2, t2] = run(s1, dest, core_subst(e->e2, e->var, l1));
        return {std::move(s2), Trace::seq(std::move(t1), std::move(t2))};
      }
      case CoreExpr::Kind::If: {
        const Label& lt = want_label(e->w);
        const Constructor& k = sigma.at(lt);
        if (k.kind != Constructor::Kind::Bool)
          internal_error("traced eval: if scrutinee is not a bool");
        auto [s1, t1] = run(sigma, dest, k.b ? e->e1 : e->e2);
        return {std::move(s1),
                Trace::cond(lt, k.b, std::move(t1), e->e1, e->e2)};
      }
      case CoreExpr::Kind::Proj: {
        const Label& lr = want_label(e->w);
        const Constructor& k = sigma.at(lr);
        if (k.kind != Constructor::Kind::Record)
          internal_error("traced eval: projection from a non-record");
        auto fl = k.field(e->field);
        if (!fl) internal_error("traced eval: record has no field " + e->field);
        Store out = sigma;
        out.bind(dest, sigma.at(*fl));
        return {std::move(out), Trace::proj(dest, e->field, lr, *fl)};
      }
      case CoreExpr::Kind::Comp: {
        auto [merged, results, theta] = iterate(sigma, e->var, e->e1, e->w);
        Store out = merged;
        out.bind(dest, Constructor::of_coll(flatten(merged, results)));
        return {std::move(out), Trace::comp(dest, want_label(e->w),
                                            std::move(theta), e->var, e->e1)};
      }
      case CoreExpr::Kind::Sum: {
        auto [merged, results, theta] = iterate(sigma, e->var, e->e1, e->w);
        Store out = merged;
        out.bind(dest, Constructor::of_int(sum_ints(merged, results)));
        return {std::move(out), Trace::sum(dest, want_label(e->w),
                                           std::move(theta), e->var, e->e1)};
      }
    }
    internal_error("unhandled core kind");
  }

  std::tuple<Store, LabelMultiset, Theta> iterate(const Store& sigma,
                                                  const std::string& x,
                                                  const CExprPtr& body,
                                                  const W& src) {
    const Constructor& k = sigma.at(want_label(src));
    if (k.kind != Constructor::Kind::Coll)
      internal_error("traced eval: iteration source is not a collection");
    LabelMultiset source = k.coll;

    Store merged = sigma;
    LabelMultiset results;
    Theta theta;
    for (const auto& [l, m] : source.entries()) {
      Label dest = supply.fresh();
      auto [sub, tr] = run(sigma, dest, core_subst(body, x, l));
      merged = orthogonal_merge(merged, sub, sigma);
      LabelMultiset one;
      one.add(dest, m);
      results = disjoint_union(results, one);
      theta.push_back({l, std::move(tr), m});
    }
    return {std::move(merged), std::move(results), std::move(theta)};
  }
};

}  // namespace

std::pair<Store, TracePtr> traced_eval(const Store& sigma, const Label& dest,
                                       const CExprPtr& e,
                                       FreshSupply& supply) {
  TracedEvaluator ev{supply};
  return ev.run(sigma, dest, e);
}

namespace {

bool consistent(const Store& sigma, const TracePtr& t, std::string* diag) {
  auto fail = [&](const std::string& msg) {
    if (diag && diag->empty()) *diag = msg;
    return false;
  };
  switch (t->kind) {
    case Trace::Kind::Assign: {
      for (const Label& l : t->term.arg_labels())
        if (!sigma.contains(l))
          return fail("assign " + t->dest.name + ": unbound argument " + l.name);
      if (!sigma.contains(t->dest))
        return fail("assign " + t->dest.name + ": destination unbound");
      if (!(sigma.at(t->dest) == op_eval(t->term, sigma)))
        return fail("assign " + t->dest.name + ": stored value differs from op");
      return true;
    }
    case Trace::Kind::Proj: {
      if (!sigma.contains(t->rec))
        return fail("proj " + t->dest.name + ": unbound record " + t->rec.name);
      const Constructor& k = sigma.at(t->rec);
      if (k.kind != Constructor::Kind::Record)
        return fail("proj " + t->dest.name + ": " + t->rec.name +
                    " is not a record");
      auto fl = k.field(t->field);
      if (!fl || *fl != t->rec_field)
        return fail("proj " + t->dest.name + ": field " + t->field +
                    " is not at " + t->rec_field.name);
      if (!sigma.contains(t->dest) || !sigma.contains(t->rec_field) ||
          !(sigma.at(t->dest) == sigma.at(t->rec_field)))
        return fail("proj " + t->dest.name + ": copied value differs");
      return true;
    }
    case Trace::Kind::Seq:
      return consistent(sigma, t->t1, diag) && consistent(sigma, t->t2, diag);
    case Trace::Kind::Cond: {
      if (!sigma.contains(t->test))
        return fail("cond: unbound test " + t->test.name);
      const Constructor& k = sigma.at(t->test);
      if (k.kind != Constructor::Kind::Bool || k.b != t->flag)
        return fail("cond: test " + t->test.name + " is not " +
                    (t->flag ? "true" : "false"));
      return consistent(sigma, t->sub, diag);
    }
    case Trace::Kind::Comp:
    case Trace::Kind::Sum: {
      if (!sigma.contains(t->src))
        return fail("iteration: unbound source " + t->src.name);
      const Constructor& k = sigma.at(t->src);
      if (k.kind != Constructor::Kind::Coll)
        return fail("iteration: " + t->src.name + " is not a collection");
      if (!(k.coll == in_star(t->theta)))
        return fail("iteration at " + t->dest.name +
                    ": source contents differ from recorded inputs");
      for (const auto& e : t->theta)
        if (!consistent(sigma, e.tr, diag)) return false;
      if (!sigma.contains(t->dest))
        return fail("iteration: destination " + t->dest.name + " unbound");
      const Constructor& d = sigma.at(t->dest);
      if (t->kind == Trace::Kind::Comp) {
        if (d.kind != Constructor::Kind::Coll ||
            !(d.coll == flatten(sigma, out_star(t->theta))))
          return fail("comp " + t->dest.name +
                      ": result differs from flattened outputs");
      } else {
        if (d.kind != Constructor::Kind::Int ||
            d.i != sum_ints(sigma, out_star(t->theta)))
          return fail("sum " + t->dest.name +
                      ": result differs from summed outputs");
      }
      return true;
    }
  }
  internal_error("unhandled trace kind");
}

}  // namespace

bool check_consistency(const Store& sigma, const TracePtr& t,
                       std::string* diag) {
  if (diag) diag->clear();
  return consistent(sigma, t, diag);
}

namespace {

TypePtr check_term(const StoreType& psi, const Term& term) {
  Context ctx;
  ctx.store = psi;
  return core_typecheck(ctx, CoreExpr::term_e(term));
}

TypePtr check_expr(const StoreType& psi, const CExprPtr& e,
                   const std::string& var, const TypePtr& var_type) {
  if (!e) type_error("trace node lacks its expression annotation");
  Context ctx;
  ctx.store = psi;
  if (!var.empty()) ctx.vars.emplace_back(var, var_type);
  return core_typecheck(ctx, e);
}

// psi |- T : l : tau. `psi` is threaded through sequencing only; labeled
// trace set entries are checked independently against the entry's input.
TraceType check_trace(StoreType psi, const TracePtr& t) {
  switch (t->kind) {
    case Trace::Kind::Assign: {
      TypePtr tau = check_term(psi, t->term);
      return {t->dest, tau};
    }
    case Trace::Kind::Proj: {
      auto it = psi.find(t->rec);
      if (it == psi.end())
        type_error("trace proj: unbound record label " + t->rec.name);
      if (!it->second->is_record())
        type_error("trace proj: " + t->rec.name + " is not a record");
      TypePtr ft = it->second->field(t->field);
      if (!ft) type_error("trace proj: record has no field " + t->field);
      return {t->dest, ft};
    }
    case Trace::Kind::Seq: {
      TraceType first = check_trace(psi, t->t1);
      psi[first.out_label] = first.out_type;
      return check_trace(std::move(psi), t->t2);
    }
    case Trace::Kind::Cond: {
      auto it = psi.find(t->test);
      if (it == psi.end() || !it->second->is_bool())
        type_error("trace cond: test " + t->test.name + " is not a bool");
      TraceType sub = check_trace(psi, t->sub);
      TypePtr tt = check_expr(psi, t->e_then, "", nullptr);
      TypePtr tf = check_expr(psi, t->e_else, "", nullptr);
      if (!type_equal(tt, tf) || !type_equal(tt, sub.out_type))
        type_error("trace cond: branch types disagree at " +
                   sub.out_label.name);
      return sub;
    }
    case Trace::Kind::Comp:
    case Trace::Kind::Sum: {
      auto it = psi.find(t->src);
      if (it == psi.end() || !it->second->is_coll())
        type_error("trace iteration: source " + t->src.name +
                   " is not a collection");
      TypePtr in_type = it->second->elem();
      TypePtr body_type =
          check_expr(psi, t->body, t->var, in_type);
      TypePtr out_type;
      for (const auto& e : t->theta) {
        StoreType entry_psi = psi;
        entry_psi[e.in] = in_type;
        TraceType sub = check_trace(std::move(entry_psi), e.tr);
        if (!out_type)
          out_type = sub.out_type;
        else if (!type_equal(out_type, sub.out_type))
          type_error("trace iteration: entry output types disagree at " +
                     t->dest.name);
      }
      if (t->kind == Trace::Kind::Comp) {
        if (!body_type->is_coll())
          type_error("trace comp: body is not collection-typed");
        if (out_type && !type_equal(out_type, body_type))
          type_error("trace comp: entries disagree with the body type");
        return {t->dest, body_type};
      }
      if (!body_type->is_int()) type_error("trace sum: body is not int");
      if (out_type && !out_type->is_int())
        type_error("trace sum: entry outputs are not ints");
      return {t->dest, Type::intty()};
    }
  }
  internal_error("unhandled trace kind");
}

}  // namespace

TraceType trace_typecheck(const StoreType& psi, const TracePtr& t) {
  return check_trace(psi, t);
}

}  // namespace nrct
