#include "nrct/adapt.hpp"

#include <sstream>

#include "nrct/error.hpp"
#include "nrct/lang.hpp"
#include "nrct/parser.hpp"

namespace nrct {

bool matches_avoiding(const Store& sigma, const StoreType& psi,
                      const LabelSet& avoid, std::string* diag) {
  std::string d;
  auto inferred = infer_store_type(sigma, psi, &d);
  if (!inferred) {
    if (diag) *diag = d;
    return false;
  }
  for (const auto& [l, t] : psi) {
    auto it = inferred->find(l);
    if (it == inferred->end()) {
      if (diag) *diag = "label " + l.name + " missing from store";
      return false;
    }
    if (!type_equal(it->second, t)) {
      if (diag)
        *diag = "label " + l.name + " has type " + to_string(it->second) +
                ", expected " + to_string(t);
      return false;
    }
  }
  for (const auto& [l, k] : sigma.cells()) {
    if (avoid.count(l)) {
      if (diag) *diag = "store binds avoided label " + l.name;
      return false;
    }
  }
  return true;
}

EditScript edit_script_from_json(const Json& j) {
  if (!j.is_array()) store_error("edit script must be a JSON array");
  EditScript out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("label") || !e.contains("value"))
      store_error("edit entries need \"label\" and \"value\"");
    out.push_back({Label(e["label"].get<std::string>()),
                   constructor_from_json(e["value"])});
  }
  return out;
}

Store apply_edits(const Store& sigma, const EditScript& edits) {
  Store out = sigma;
  for (const Edit& e : edits) out.rebind(e.label, e.value);
  return out;
}

void check_edits_legal(const Store& original, const Store& edited,
                       const TracePtr& trace) {
  LabelSet written = written_labels(trace);
  for (const auto& [l, k] : edited.cells())
    if (written.count(l))
      edit_error("edit touches label " + l.name + " written by the trace");
  StoreType psi;
  auto orig_type = infer_store_type(original);
  if (!orig_type) edit_error("original store is ill-typed");
  std::string diag;
  if (!matches_avoiding(edited, *orig_type, written, &diag))
    edit_error("edited store no longer matches the input store type: " + diag);
}

namespace {

struct Adaptor {
  FreshSupply& supply;
  LabelSet written;  // per-run write-once discipline

  void write(Store& s, const Label& l, Constructor k) {
    if (!written.insert(l).second)
      internal_error("adaptation wrote " + l.name + " twice");
    s.rebind(l, std::move(k));
  }

  std::pair<Store, TracePtr> run(const Store& sigma, const TracePtr& t) {
    switch (t->kind) {
      case Trace::Kind::Assign: {
        Store out = sigma;
        write(out, t->dest, op_eval(t->term, sigma));
        return {std::move(out), Trace::assign(t->dest, t->term)};
      }
      case Trace::Kind::Proj: {
        const Constructor& k = sigma.at(t->rec);
        if (k.kind != Constructor::Kind::Record)
          internal_error("adapt: " + t->rec.name + " is not a record");
        auto fl = k.field(t->field);
        if (!fl)
          internal_error("adapt: record lost field " + t->field);
        Store out = sigma;
        write(out, t->dest, sigma.at(*fl));
        return {std::move(out), Trace::proj(t->dest, t->field, t->rec, *fl)};
      }
      case Trace::Kind::Seq: {
        auto [s1, t1] = run(sigma, t->t1);
        auto [s2, t2] = run(s1, t->t2);
        return {std::move(s2), Trace::seq(std::move(t1), std::move(t2))};
      }
      case Trace::Kind::Cond: {
        const Constructor& k = sigma.at(t->test);
        if (k.kind != Constructor::Kind::Bool)
          internal_error("adapt: test " + t->test.name + " is not a bool");
        if (k.b == t->flag) {
          auto [s1, sub] = run(sigma, t->sub);
          if (trace_out(sub) != trace_out(t->sub))
            internal_error("adapt: conditional output moved");
          return {std::move(s1), Trace::cond(t->test, t->flag, std::move(sub),
                                             t->e_then, t->e_else)};
        }
        // Control changed: fall back on traced evaluation of the other
        // recorded branch, at the original destination.
        const CExprPtr& branch = k.b ? t->e_then : t->e_else;
        if (!branch)
          internal_error(
              "adapt: conditional lacks its branch expression annotation");
        Label dest = trace_out(t->sub);
        auto [s1, sub] = traced_reeval(sigma, dest, branch);
        return {std::move(s1),
                Trace::cond(t->test, k.b, std::move(sub), t->e_then, t->e_else)};
      }
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        const Constructor& k = sigma.at(t->src);
        if (k.kind != Constructor::Kind::Coll)
          internal_error("adapt: source " + t->src.name +
                         " is not a collection");
        std::map<Label, const ThetaEntry*> cached;
        for (const auto& e : t->theta) cached[e.in] = &e;

        Store merged = sigma;
        LabelMultiset results;
        Theta theta;
        for (const auto& [l, m] : k.coll.entries()) {
          Store sub_store;
          TracePtr sub_trace;
          auto it = cached.find(l);
          if (it != cached.end()) {
            // Cached multiplicity is ignored; the current one is used.
            std::tie(sub_store, sub_trace) = run(sigma, it->second->tr);
          } else {
            if (!t->body)
              internal_error(
                  "adapt: iteration lacks its body expression annotation");
            Label dest = supply.fresh();
            std::tie(sub_store, sub_trace) =
                traced_reeval(sigma, dest, core_subst(t->body, t->var, l));
          }
          merged = merge_run(merged, sub_store, sigma);
          LabelMultiset one;
          one.add(trace_out(sub_trace), m);
          results = disjoint_union(results, one);
          theta.push_back({l, std::move(sub_trace), m});
        }
        Store out = merged;
        Constructor result =
            t->kind == Trace::Kind::Comp
                ? Constructor::of_coll(flatten(merged, results))
                : Constructor::of_int(sum_ints(merged, results));
        write(out, t->dest, std::move(result));
        TracePtr tr =
            t->kind == Trace::Kind::Comp
                ? Trace::comp(t->dest, t->src, std::move(theta), t->var, t->body)
                : Trace::sum(t->dest, t->src, std::move(theta), t->var, t->body);
        return {std::move(out), std::move(tr)};
      }
    }
    internal_error("unhandled trace kind");
  }

  // Fresh traced evaluation inside an adaptation; its writes join the
  // per-run write set.
  std::pair<Store, TracePtr> traced_reeval(const Store& sigma,
                                           const Label& dest,
                                           const CExprPtr& e) {
    Store base = sigma;
    auto [s1, t1] = traced_eval(sigma, dest, e, supply);
    for (const Label& l : written_labels(t1))
      if (!written.insert(l).second)
        internal_error("adapt: re-evaluation rewrote " + l.name);
    return {std::move(s1), std::move(t1)};
  }

  // Orthogonal merge that tolerates rewrites of labels this run already
  // owns (a cached subtrace rewrites its own labels in place).
  Store merge_run(const Store& acc, const Store& sub, const Store& base) {
    Store out = acc;
    for (const auto& [l, k] : sub.cells()) {
      if (base.contains(l) && !written.count(l)) continue;
      if (acc.contains(l) && !written.count(l))
        internal_error("adapt: iteration branches overlap at " + l.name);
      out.rebind(l, k);
    }
    return out;
  }
};

}  // namespace

std::pair<Store, TracePtr> adapt(const Store& sigma, const TracePtr& t,
                                 FreshSupply& supply) {
  Adaptor a{supply, {}};
  return a.run(sigma, t);
}

FidelityReport run_fidelity_check(const CExprPtr& e, const Store& sigma1,
                                  const EditScript& edits, const Label& dest) {
  FidelityReport report;

  FreshSupply supply1;
  for (const auto& [l, k] : sigma1.cells()) supply1.avoid(l);
  auto [out1, trace1] = traced_eval(sigma1, dest, e, supply1);

  Store sigma2 = apply_edits(sigma1, edits);
  check_edits_legal(sigma1, sigma2, trace1);

  // The adapted run draws fresh labels beyond everything the first run
  // used; the from-scratch run starts its own supply.
  FreshSupply supply_adapt(supply1.next_index());
  for (const auto& [l, k] : sigma2.cells()) supply_adapt.avoid(l);
  auto [adapted_store, adapted_trace] = adapt(sigma2, trace1, supply_adapt);

  FreshSupply supply2;
  for (const auto& [l, k] : sigma2.cells()) supply2.avoid(l);
  auto [scratch_store, scratch_trace] = traced_eval(sigma2, dest, e, supply2);

  ValuePtr va = readback_infer(adapted_store, dest);
  ValuePtr vb = readback_infer(scratch_store, dest);
  report.values_equal = value_equal(va, vb);

  LabelSet frontier;
  for (const auto& [l, k] : sigma2.cells()) frontier.insert(l);
  frontier.insert(dest);
  report.traces_equal =
      trace_alpha_eq(adapted_trace, scratch_trace, frontier);

  report.pass = report.values_equal && report.traces_equal;
  if (!report.pass) {
    std::ostringstream os;
    os << "fidelity failure\n";
    os << "adapted value:      " << to_string(va) << "\n";
    os << "from-scratch value: " << to_string(vb) << "\n";
    if (!report.traces_equal) {
      os << "adapted trace:\n" << trace_to_text(adapted_trace);
      os << "from-scratch trace:\n" << trace_to_text(scratch_trace);
    }
    report.detail = os.str();
  }
  return report;
}

}  // namespace nrct
