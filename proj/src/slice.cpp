#include "nrct/slice.hpp"

#include <map>
#include <sstream>

#include "nrct/error.hpp"

namespace nrct {

namespace {

TracePtr seq_join(const TracePtr& a, const TracePtr& b) {
  if (!a) return b;
  if (!b) return a;
  return Trace::seq(a, b);
}

struct BackwardSlicer {
  // Walks the trace in reverse execution order. `need` is the set of
  // labels whose definitions are still wanted; a kept definition removes
  // its destination (labels are written once) and adds its dependencies.
  TracePtr go(const TracePtr& t, LabelSet& need) {
    switch (t->kind) {
      case Trace::Kind::Assign: {
        if (!need.count(t->dest)) return nullptr;
        need.erase(t->dest);
        for (const Label& l : t->term.arg_labels()) need.insert(l);
        return t;
      }
      case Trace::Kind::Proj: {
        if (!need.count(t->dest)) return nullptr;
        need.erase(t->dest);
        need.insert(t->rec);
        need.insert(t->rec_field);
        return t;
      }
      case Trace::Kind::Seq: {
        TracePtr t2 = go(t->t2, need);
        TracePtr t1 = go(t->t1, need);
        return seq_join(t1, t2);
      }
      case Trace::Kind::Cond: {
        Label out = trace_out(t->sub);
        if (!need.count(out)) {
          // Probe: is anything inside the branch wanted?
          LabelSet probe = need;
          if (!go(t->sub, probe)) return nullptr;
        }
        // Relevant: keep the conditional with its full output spine and
        // charge the control decision to the test label.
        need.insert(out);
        TracePtr sub = go(t->sub, need);
        need.insert(t->test);
        return Trace::cond(t->test, t->flag, sub ? sub : t->sub, t->e_then,
                           t->e_else);
      }
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        bool out_needed = need.count(t->dest) != 0;
        if (out_needed) need.erase(t->dest);
        Theta kept;
        for (auto it = t->theta.rbegin(); it != t->theta.rend(); ++it) {
          const ThetaEntry& e = *it;
          if (out_needed) {
            // The result aggregates every entry's output.
            need.insert(trace_out(e.tr));
            TracePtr sub = go(e.tr, need);
            kept.push_back({e.in, sub ? sub : e.tr, e.mult});
            continue;
          }
          LabelSet probe = need;
          TracePtr sub = go(e.tr, probe);
          if (sub) {
            need = std::move(probe);
            kept.push_back({e.in, sub, e.mult});
          }
        }
        if (!out_needed && kept.empty()) return nullptr;
        need.insert(t->src);
        std::reverse(kept.begin(), kept.end());
        return t->kind == Trace::Kind::Comp
                   ? Trace::comp(t->dest, t->src, std::move(kept), t->var,
                                 t->body)
                   : Trace::sum(t->dest, t->src, std::move(kept), t->var,
                                t->body);
      }
    }
    internal_error("unhandled trace kind");
  }
};

struct ForwardSlicer {
  // Walks in execution order; `taint` grows with every kept definition.
  TracePtr go(const TracePtr& t, LabelSet& taint) {
    switch (t->kind) {
      case Trace::Kind::Assign: {
        for (const Label& l : t->term.arg_labels()) {
          if (taint.count(l)) {
            taint.insert(t->dest);
            return t;
          }
        }
        return nullptr;
      }
      case Trace::Kind::Proj: {
        if (taint.count(t->rec) || taint.count(t->rec_field)) {
          taint.insert(t->dest);
          return t;
        }
        return nullptr;
      }
      case Trace::Kind::Seq: {
        TracePtr t1 = go(t->t1, taint);
        TracePtr t2 = go(t->t2, taint);
        return seq_join(t1, t2);
      }
      case Trace::Kind::Cond: {
        if (taint.count(t->test)) {
          // The whole branch is control-dependent on the test.
          for (const Label& l : written_labels(t->sub)) taint.insert(l);
          return t;
        }
        TracePtr sub = go(t->sub, taint);
        if (!sub) return nullptr;
        return Trace::cond(t->test, t->flag, sub, t->e_then, t->e_else);
      }
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        bool src_tainted = taint.count(t->src) != 0;
        if (src_tainted) {
          // Iteration domain is tainted: everything it writes follows it.
          for (const Label& l : written_labels(t)) taint.insert(l);
          return t;
        }
        Theta kept;
        for (const ThetaEntry& e : t->theta) {
          TracePtr sub = go(e.tr, taint);
          if (sub) kept.push_back({e.in, sub, e.mult});
        }
        if (kept.empty()) return nullptr;
        bool result_tainted = false;
        for (const ThetaEntry& e : kept)
          if (taint.count(trace_out(e.tr))) result_tainted = true;
        if (result_tainted) taint.insert(t->dest);
        return t->kind == Trace::Kind::Comp
                   ? Trace::comp(t->dest, t->src, std::move(kept), t->var,
                                 t->body)
                   : Trace::sum(t->dest, t->src, std::move(kept), t->var,
                                t->body);
      }
    }
    internal_error("unhandled trace kind");
  }
};

}  // namespace

TracePtr backward_slice(const TracePtr& t, const LabelSet& focus) {
  LabelSet need = focus;
  BackwardSlicer s;
  return s.go(t, need);
}

TracePtr forward_slice(const TracePtr& t, const LabelSet& focus) {
  LabelSet taint = focus;
  ForwardSlicer s;
  return s.go(t, taint);
}

LabelSet backward_closure(const TracePtr& t, const LabelSet& focus) {
  LabelSet need = focus;
  BackwardSlicer s;
  TracePtr sliced = s.go(t, need);
  // `need` now holds the unresolved demands (the input frontier); the
  // retained definitions are on the dependency path as well.
  if (sliced)
    for (const Label& l : written_labels(sliced)) need.insert(l);
  for (const Label& l : focus) need.insert(l);
  return need;
}

LabelSet forward_closure(const TracePtr& t, const LabelSet& focus) {
  LabelSet taint = focus;
  ForwardSlicer s;
  s.go(t, taint);
  return taint;
}

namespace {

void flatten_steps(const TracePtr& t, std::vector<TracePtr>& out) {
  if (t->kind == Trace::Kind::Seq) {
    flatten_steps(t->t1, out);
    flatten_steps(t->t2, out);
  } else {
    out.push_back(t);
  }
}

bool step_is_sub(const TracePtr& a, const TracePtr& b);

// Subsequence check over flattened step lists.
bool steps_are_sub(const std::vector<TracePtr>& a,
                   const std::vector<TracePtr>& b) {
  size_t i = 0;
  for (const TracePtr& step : b) {
    if (i < a.size() && step_is_sub(a[i], step)) ++i;
  }
  return i == a.size();
}

bool step_is_sub(const TracePtr& a, const TracePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Trace::Kind::Assign:
      return a->dest == b->dest && term_equal(a->term, b->term);
    case Trace::Kind::Proj:
      return a->dest == b->dest && a->field == b->field && a->rec == b->rec &&
             a->rec_field == b->rec_field;
    case Trace::Kind::Seq:
      return is_subtrace(a, b);
    case Trace::Kind::Cond:
      return a->test == b->test && a->flag == b->flag &&
             is_subtrace(a->sub, b->sub);
    case Trace::Kind::Comp:
    case Trace::Kind::Sum: {
      if (a->dest != b->dest || a->src != b->src) return false;
      for (const ThetaEntry& ea : a->theta) {
        bool found = false;
        for (const ThetaEntry& eb : b->theta) {
          if (ea.in != eb.in) continue;
          found = ea.mult == eb.mult && is_subtrace(ea.tr, eb.tr);
          break;
        }
        if (!found) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

bool is_subtrace(const TracePtr& small, const TracePtr& big) {
  if (!small) return true;
  if (!big) return false;
  std::vector<TracePtr> a, b;
  flatten_steps(small, a);
  flatten_steps(big, b);
  return steps_are_sub(a, b);
}

namespace {

SExprPtr subst_get(const std::map<Label, SExprPtr>& env, const Label& l) {
  auto it = env.find(l);
  return it == env.end() ? sx::lab(l) : it->second;
}

SExprPtr term_expr(const Term& t, const std::map<Label, SExprPtr>& env) {
  auto at = [&](const W& w) { return subst_get(env, w.lab); };
  using K = Term::Kind;
  switch (t.kind) {
    case K::IntLit:
      return sx::intlit(t.i);
    case K::BoolLit:
      return sx::boollit(t.b);
    case K::Plus:
      return sx::plus(at(t.a0), at(t.a1));
    case K::Eq:
      return sx::eq(at(t.a0), at(t.a1));
    case K::And:
      return sx::land(at(t.a0), at(t.a1));
    case K::Not:
      return sx::lnot(at(t.a0));
    case K::Record: {
      std::vector<std::pair<std::string, SExprPtr>> fs;
      for (const auto& [f, w] : t.fields) fs.emplace_back(f, at(w));
      return sx::record(std::move(fs));
    }
    case K::Copy:
      return at(t.a0);
    case K::Empty:
      return sx::empty(t.elem);
    case K::Singleton:
      return sx::singleton(at(t.a0));
    case K::Union:
      return sx::unione(at(t.a0), at(t.a1));
    case K::IsEmpty:
      return sx::isempty(at(t.a0));
  }
  internal_error("unhandled term kind");
}

// Scalar steps are substituted into their uses; constructor steps stay.
bool inlinable(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Copy:
    case Term::Kind::IntLit:
    case Term::Kind::BoolLit:
    case Term::Kind::Plus:
    case Term::Kind::Eq:
    case Term::Kind::And:
    case Term::Kind::Not:
    case Term::Kind::IsEmpty:
      return true;
    default:
      return false;
  }
}

struct Simplifier {
  std::map<Label, SExprPtr> env;

  std::vector<SimpPtr> walk(const TracePtr& t, bool tail) {
    switch (t->kind) {
      case Trace::Kind::Assign: {
        if (!tail && inlinable(t->term)) {
          env[t->dest] = term_expr(t->term, env);
          return {};
        }
        auto n = std::make_shared<SimpNode>();
        n->kind = SimpNode::Kind::Step;
        n->dest = t->dest;
        n->expr = term_expr(t->term, env);
        return {n};
      }
      case Trace::Kind::Proj: {
        if (!tail) {
          env[t->dest] = subst_get(env, t->rec_field);
          return {};
        }
        auto n = std::make_shared<SimpNode>();
        n->kind = SimpNode::Kind::Step;
        n->dest = t->dest;
        n->expr = subst_get(env, t->rec_field);
        return {n};
      }
      case Trace::Kind::Seq: {
        std::vector<SimpPtr> out = walk(t->t1, false);
        std::vector<SimpPtr> t2 = walk(t->t2, tail);
        out.insert(out.end(), t2.begin(), t2.end());
        return out;
      }
      case Trace::Kind::Cond: {
        auto n = std::make_shared<SimpNode>();
        n->kind = SimpNode::Kind::Cond;
        n->expr = subst_get(env, t->test);
        n->flag = t->flag;
        n->body = walk(t->sub, true);
        return {n};
      }
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        auto n = std::make_shared<SimpNode>();
        n->kind = SimpNode::Kind::Iter;
        n->is_comp = t->kind == Trace::Kind::Comp;
        n->dest = t->dest;
        n->src = t->src;
        for (const ThetaEntry& e : t->theta)
          n->entries.emplace_back(e.in, walk(e.tr, true));
        return {n};
      }
    }
    internal_error("unhandled trace kind");
  }

  // Fully-inlined expression for the run's output; algebraic noise (empty
  // union branches, zero summands) is dropped.
  SExprPtr residue(const TracePtr& t) {
    switch (t->kind) {
      case Trace::Kind::Assign:
        return resid_env(t)[t->dest];
      case Trace::Kind::Proj:
      case Trace::Kind::Seq:
      case Trace::Kind::Cond:
      case Trace::Kind::Comp:
      case Trace::Kind::Sum:
        return resid_env(t)[trace_out(t)];
    }
    internal_error("unhandled trace kind");
  }

  std::map<Label, SExprPtr> resid_env(const TracePtr& t) {
    std::map<Label, SExprPtr> out;
    resid_walk(t, out);
    return out;
  }

  void resid_walk(const TracePtr& t, std::map<Label, SExprPtr>& env2) {
    switch (t->kind) {
      case Trace::Kind::Assign:
        env2[t->dest] = term_expr(t->term, env2);
        return;
      case Trace::Kind::Proj:
        env2[t->dest] = subst_get(env2, t->rec_field);
        return;
      case Trace::Kind::Seq:
        resid_walk(t->t1, env2);
        resid_walk(t->t2, env2);
        return;
      case Trace::Kind::Cond:
        resid_walk(t->sub, env2);
        return;
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        std::vector<SExprPtr> parts;
        for (const ThetaEntry& e : t->theta) {
          resid_walk(e.tr, env2);
          parts.push_back(env2[trace_out(e.tr)]);
        }
        bool is_comp = t->kind == Trace::Kind::Comp;
        SExprPtr acc;
        for (const SExprPtr& p : parts) {
          if (is_comp && p->kind == SurfaceExpr::Kind::Empty) continue;
          if (!is_comp && p->kind == SurfaceExpr::Kind::IntLit && p->i == 0)
            continue;
          acc = !acc ? p : (is_comp ? sx::unione(acc, p) : sx::plus(acc, p));
        }
        if (!acc) acc = is_comp ? sx::empty(nullptr) : sx::intlit(0);
        env2[t->dest] = acc;
        return;
      }
    }
  }
};

// Paper-style rendering for simplified expressions: records in
// parentheses, '=' for equality, 'U' for union.
void simp_expr_text(const SExprPtr& e, std::ostream& os) {
  using K = SurfaceExpr::Kind;
  switch (e->kind) {
    case K::Lab:
      os << e->lab.name;
      break;
    case K::IntLit:
      os << e->i;
      break;
    case K::BoolLit:
      os << (e->b ? "true" : "false");
      break;
    case K::Plus:
      simp_expr_text(e->e0, os);
      os << " + ";
      simp_expr_text(e->e1, os);
      break;
    case K::Eq:
      simp_expr_text(e->e0, os);
      os << " = ";
      simp_expr_text(e->e1, os);
      break;
    case K::And:
      simp_expr_text(e->e0, os);
      os << " && ";
      simp_expr_text(e->e1, os);
      break;
    case K::Not:
      os << "!";
      simp_expr_text(e->e0, os);
      break;
    case K::RecordLit: {
      os << "(";
      bool first = true;
      for (const auto& [f, fe] : e->fields) {
        if (!first) os << ", ";
        first = false;
        os << f << ": ";
        simp_expr_text(fe, os);
      }
      os << ")";
      break;
    }
    case K::Empty:
      os << "{}";
      break;
    case K::Singleton:
      os << "{";
      simp_expr_text(e->e0, os);
      os << "}";
      break;
    case K::Union:
      simp_expr_text(e->e0, os);
      os << " U ";
      simp_expr_text(e->e1, os);
      break;
    case K::IsEmpty:
      os << "empty(";
      simp_expr_text(e->e0, os);
      os << ")";
      break;
    default:
      os << "?";
      break;
  }
}

struct SimpPrinter {
  std::ostringstream os;

  void indent(int n) {
    for (int i = 0; i < n; ++i) os << "  ";
  }

  void print_seq(const std::vector<SimpPtr>& nodes, int depth) {
    bool first = true;
    for (const SimpPtr& n : nodes) {
      if (!first) {
        os << ";\n";
        indent(depth);
      }
      first = false;
      print(n, depth);
    }
  }

  void print(const SimpPtr& n, int depth) {
    switch (n->kind) {
      case SimpNode::Kind::Step:
        os << n->dest.name << " <- ";
        simp_expr_text(n->expr, os);
        break;
      case SimpNode::Kind::Cond:
        os << "cond(";
        simp_expr_text(n->expr, os);
        os << ", " << (n->flag ? "t" : "f") << ", ";
        print_seq(n->body, depth + 1);
        os << ")";
        break;
      case SimpNode::Kind::Iter: {
        os << n->dest.name << " <- " << (n->is_comp ? "comp(" : "sum(")
           << n->src.name << ", {";
        bool first = true;
        for (const auto& [in, body] : n->entries) {
          if (!first) os << ",";
          first = false;
          os << "\n";
          indent(depth + 1);
          os << "[" << in.name << "] ";
          print_seq(body, depth + 1);
        }
        if (!n->entries.empty()) {
          os << "\n";
          indent(depth);
        }
        os << "})";
        break;
      }
    }
  }
};

}  // namespace

SimplifiedView simplify(const TracePtr& t) {
  SimplifiedView view;
  Simplifier s;
  view.nodes = s.walk(t, true);
  Simplifier r;
  view.residue = r.residue(t);
  return view;
}

std::string simplified_to_text(const SimplifiedView& view) {
  SimpPrinter p;
  p.print_seq(view.nodes, 0);
  p.os << "\n";
  return p.os.str();
}

}  // namespace nrct
