#include "nrct/property_suite.hpp"

#include <iostream>
#include <sstream>

#include "nrct/adapt.hpp"
#include "nrct/error.hpp"
#include "nrct/eval.hpp"
#include "nrct/lang.hpp"
#include "nrct/parser.hpp"
#include "nrct/provenance.hpp"
#include "nrct/slice.hpp"

namespace nrct {

Instance random_instance(Gen& g, int depth, int max_labels, bool want_coll) {
  for (;;) {
    auto [store, psi] = g.random_store(max_labels);
    TypePtr want =
        want_coll ? Type::coll(g.random_type(1)) : g.random_type(2);
    Context ctx;
    ctx.store = psi;
    SExprPtr raw = g.random_expr(ctx, want, depth);
    try {
      auto [type, annotated] = surface_typecheck(ctx, raw);
      Instance inst;
      inst.store = std::move(store);
      inst.psi = std::move(psi);
      inst.surface = annotated;
      inst.core = anormalize(desugar(annotated));
      inst.type = type;
      return inst;
    } catch (const Error&) {
      // A bare {} in an unconstrained position; draw again.
      continue;
    }
  }
}

namespace {

using Runner = std::function<void(Gen&)>;

PropertyResult drive(const std::string& name, unsigned long long seed,
                     int count, const Runner& one) {
  PropertyResult res;
  res.name = name;
  res.total = count;
  Gen g(seed);
  for (int i = 0; i < count; ++i) {
    try {
      one(g);
      ++res.passed;
    } catch (const std::exception& e) {
      if (res.first_failure.empty()) {
        std::ostringstream os;
        os << "instance " << i << ": " << e.what();
        res.first_failure = os.str();
      }
    }
  }
  return res;
}

[[noreturn]] void prop_fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

ValueEnv env_of_store(const Store& sigma, const StoreType& psi) {
  ValueEnv env;
  for (const auto& [l, t] : psi) env.labels[l] = readback(sigma, t, l);
  return env;
}

FreshSupply supply_for(const Store& sigma) {
  FreshSupply s;
  for (const auto& [l, k] : sigma.cells()) s.avoid(l);
  return s;
}

}  // namespace

PropertyResult prop_consistency(unsigned long long seed, int count) {
  return drive("consistency", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 12);
    FreshSupply supply = supply_for(inst.store);
    auto [out, trace] = traced_eval(inst.store, inst.dest, inst.core, supply);
    if (trace_out(trace) != inst.dest) prop_fail("out(T) differs from dest");
    std::string diag;
    if (!check_consistency(out, trace, &diag))
      prop_fail("trace inconsistent: " + diag);
    // Soundness: the produced trace typechecks at the program's type.
    TraceType tt = trace_typecheck(inst.psi, trace);
    if (!type_equal(tt.out_type, inst.type))
      prop_fail("trace type disagrees with the program type");
  });
}

PropertyResult prop_fidelity(unsigned long long seed, int count) {
  return drive("total-fidelity", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 12);
    FreshSupply supply = supply_for(inst.store);
    auto [out, trace] = traced_eval(inst.store, inst.dest, inst.core, supply);

    EditScript edits;
    for (int attempt = 0; attempt < 5; ++attempt) {
      EditScript candidate =
          g.random_edits(inst.store, inst.psi, written_labels(trace));
      try {
        check_edits_legal(inst.store, apply_edits(inst.store, candidate),
                          trace);
        edits = std::move(candidate);
        break;
      } catch (const Error&) {
        continue;  // the random rewire was cyclic or ill-typed
      }
    }

    FidelityReport report =
        run_fidelity_check(inst.core, inst.store, edits, inst.dest);
    if (!report.pass) prop_fail(report.detail);
  });
}

PropertyResult prop_extract_where(unsigned long long seed, int count) {
  return drive("where-extraction-oracle", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 10);
    FreshSupply s1 = supply_for(inst.store);
    auto [out, trace] = traced_eval(inst.store, inst.dest, inst.core, s1);
    AnnMap<WhereAnn> h = identity_where(inst.store);
    FreshSupply s2 = supply_for(inst.store);
    auto [out2, oracle] = where_eval(inst.store, h, inst.dest, inst.core, s2);
    AnnMap<WhereAnn> extracted = where_extract(h, trace);
    if (!(oracle == extracted))
      prop_fail("where extraction differs from the annotated semantics");
    if (!(out == out2)) prop_fail("annotated store differs from traced store");
  });
}

PropertyResult prop_extract_dep(unsigned long long seed, int count) {
  return drive("dep-extraction-oracle", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 10);
    FreshSupply s1 = supply_for(inst.store);
    auto [out, trace] = traced_eval(inst.store, inst.dest, inst.core, s1);
    AnnMap<DepAnn> h = identity_dep(inst.store);
    FreshSupply s2 = supply_for(inst.store);
    auto [out2, oracle] = dep_eval(inst.store, h, inst.dest, inst.core, s2);
    AnnMap<DepAnn> extracted = dep_extract(h, trace);
    if (!(oracle == extracted))
      prop_fail("dep extraction differs from the annotated semantics");
    if (!(out == out2)) prop_fail("annotated store differs from traced store");
  });
}

PropertyResult prop_extract_semiring(unsigned long long seed, int count) {
  return drive("semiring-extraction-oracle", seed, count, [](Gen& g) {
    bool coll_result = g.coin(0.7);
    Instance inst = random_instance(g, 4, 10, coll_result);
    FreshSupply s1 = supply_for(inst.store);
    auto [out, trace] = traced_eval(inst.store, inst.dest, inst.core, s1);
    KAnnMap<PolySemiring> h = initial_k_annotations<PolySemiring>(
        inst.store, [](const Label&, const Label& el, const BigInt&) {
          return Poly::var(el.name);
        });
    FreshSupply s2 = supply_for(inst.store);
    auto [out2, oracle] =
        k_eval<PolySemiring>(inst.store, h, inst.dest, inst.core, s2);
    KAnnMap<PolySemiring> extracted = k_extract<PolySemiring>(h, trace);
    if (!(oracle == extracted))
      prop_fail("semiring extraction differs from the annotated semantics");
    if (!(out == out2)) prop_fail("annotated store differs from traced store");
  });
}

PropertyResult prop_denotational_agreement(unsigned long long seed,
                                           int count) {
  return drive("operational-denotational-agreement", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 12);
    FreshSupply supply = supply_for(inst.store);
    Store out = eval(inst.store, inst.dest, inst.core, supply);
    ValuePtr op_val = readback(out, inst.type, inst.dest);
    ValuePtr den_val = denote(inst.surface, env_of_store(inst.store, inst.psi));
    if (!value_equal(op_val, den_val))
      prop_fail("operational value " + to_string(op_val) +
                " differs from denotational " + to_string(den_val));
  });
}

PropertyResult prop_eval_store_agreement(unsigned long long seed, int count) {
  return drive("eval-traced-store-agreement", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 12);
    FreshSupply s1 = supply_for(inst.store);
    Store plain = eval(inst.store, inst.dest, inst.core, s1);
    FreshSupply s2 = supply_for(inst.store);
    auto [traced, trace] = traced_eval(inst.store, inst.dest, inst.core, s2);
    if (!(plain == traced))
      prop_fail("plain and traced evaluation produced different stores");
    if (!plain.extends(inst.store))
      prop_fail("evaluation did not extend the input store");
  });
}

PropertyResult prop_roundtrip(unsigned long long seed, int count) {
  return drive("core-print-parse-roundtrip", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 10);
    std::string text = print_core(inst.core);
    CExprPtr back = core_of_surface_strict(parse_expr(text));
    if (!core_equal(back, inst.core))
      prop_fail("parse(print(core)) differs for: " + text);
  });
}

namespace {

// Replaces the first int literal with a bool literal (or vice versa);
// returns null when the program has no scalar leaf.
SExprPtr mutate_leaf(const SExprPtr& e, bool& done) {
  if (done) return e;
  SurfaceExpr out = *e;
  if (e->kind == SurfaceExpr::Kind::IntLit) {
    done = true;
    return sx::boollit(true);
  }
  if (e->kind == SurfaceExpr::Kind::BoolLit) {
    done = true;
    return sx::intlit(BigInt(1));
  }
  for (auto& [f, fe] : out.fields) fe = mutate_leaf(fe, done);
  if (out.e0) out.e0 = mutate_leaf(out.e0, done);
  if (out.e1) out.e1 = mutate_leaf(out.e1, done);
  if (out.e2) out.e2 = mutate_leaf(out.e2, done);
  return mk_surface(std::move(out));
}

}  // namespace

PropertyResult prop_typecheck_mutation(unsigned long long seed, int count) {
  return drive("typecheck-rejects-mutants", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 3, 8);
    bool done = false;
    SExprPtr mutant = mutate_leaf(inst.surface, done);
    if (!done) return;  // no scalar leaf to flip
    Context ctx;
    ctx.store = inst.psi;
    bool rejected = false;
    try {
      surface_typecheck(ctx, mutant);
    } catch (const Error&) {
      rejected = true;
    }
    if (!rejected) prop_fail("mutated program still typechecks");
  });
}

PropertyResult prop_adapt_stability(unsigned long long seed, int count) {
  return drive("adapt-stability", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 10);
    FreshSupply s1 = supply_for(inst.store);
    auto [out, trace] = traced_eval(inst.store, inst.dest, inst.core, s1);
    FreshSupply s2(s1.next_index());
    auto [re_store, re_trace] = adapt(inst.store, trace, s2);
    if (!(re_store == out)) prop_fail("stable adaptation changed the store");
    if (trace_to_text(re_trace) != trace_to_text(trace))
      prop_fail("stable adaptation changed the trace");
  });
}

PropertyResult prop_where_copy_chains(unsigned long long seed, int count) {
  return drive("where-iff-copy-chain", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 4, 10);
    FreshSupply s1 = supply_for(inst.store);
    auto [out, trace] = traced_eval(inst.store, inst.dest, inst.core, s1);
    AnnMap<WhereAnn> h = where_extract(identity_where(inst.store), trace);
    for (const auto& [l, k] : out.cells()) {
      auto it = h.find(l);
      WhereAnn ann = it == h.end() ? WhereAnn{} : it->second;
      if (ann) {
        if (!chain_of_copies(trace, *ann, l))
          prop_fail("where token without a copy chain at " + l.name);
      } else if (inst.store.contains(l)) {
        // Input labels keep their own (identity) annotation.
        continue;
      } else {
        // No annotation: no chain from any input label may exist.
        for (const auto& [src, sk] : inst.store.cells())
          if (chain_of_copies(trace, src, l) && src != l)
            prop_fail("copy chain without a where token at " + l.name);
      }
    }
  });
}

PropertyResult prop_bag_semantics(unsigned long long seed, int count) {
  return drive("nat-semiring-recovers-bags", seed, count, [](Gen& g) {
    Instance inst = random_instance(g, 3, 8, /*want_coll=*/true);
    // Multiplicity-weighted initial annotations line up the two readings.
    KAnnMap<NatSemiring> h = initial_k_annotations<NatSemiring>(
        inst.store,
        [](const Label&, const Label&, const BigInt& m) { return m; });
    FreshSupply s1 = supply_for(inst.store);
    auto [out, oh] =
        k_eval<NatSemiring>(inst.store, h, inst.dest, inst.core, s1);
    KValuePtr<NatSemiring> kv =
        k_readback<NatSemiring>(out, oh, inst.type, inst.dest);
    ValuePtr plain = readback(out, inst.type, inst.dest);

    // Compare the outer collection: value multiset vs K-weights.
    std::vector<std::pair<std::string, BigInt>> bag, kbag;
    for (const auto& [v, m] : plain->bag()) bag.emplace_back(to_string(v), m);
    for (const auto& [v, k] : kv->coll)
      kbag.emplace_back(k_value_show<NatSemiring>(v), k);
    if (bag.size() != kbag.size())
      prop_fail("bag and nat-annotated readback have different supports");
    for (size_t i = 0; i < bag.size(); ++i)
      if (bag[i].second != kbag[i].second)
        prop_fail("multiplicity of " + bag[i].first + " is " +
                  bag[i].second.str() + " but its nat weight is " +
                  kbag[i].second.str());
  });
}

namespace {

template <class S>
PropertyResult semiring_laws(const std::string& name, unsigned long long seed,
                             int count,
                             std::function<typename S::K(Gen&)> elem) {
  return drive(name, seed, count, [elem](Gen& g) {
    using K = typename S::K;
    K a = elem(g), b = elem(g), c = elem(g);
    auto chk = [](bool ok, const char* law) {
      if (!ok) prop_fail(std::string("law violated: ") + law);
    };
    chk(S::eq(S::add(a, b), S::add(b, a)), "+ commutative");
    chk(S::eq(S::add(S::add(a, b), c), S::add(a, S::add(b, c))),
        "+ associative");
    chk(S::eq(S::add(a, S::zero()), a), "0 is + unit");
    chk(S::eq(S::mul(a, b), S::mul(b, a)), "* commutative");
    chk(S::eq(S::mul(S::mul(a, b), c), S::mul(a, S::mul(b, c))),
        "* associative");
    chk(S::eq(S::mul(a, S::one()), a), "1 is * unit");
    chk(S::eq(S::mul(a, S::zero()), S::zero()), "0 annihilates");
    chk(S::eq(S::mul(a, S::add(b, c)), S::add(S::mul(a, b), S::mul(a, c))),
        "* distributes over +");
  });
}

Poly random_poly(Gen& g) {
  Poly p = Poly::constant(BigInt(g.pick(4)));
  int terms = g.pick(3);
  for (int i = 0; i < terms; ++i) {
    Poly mono = Poly::constant(BigInt(1 + g.pick(3)));
    int vars = 1 + g.pick(2);
    for (int v = 0; v < vars; ++v)
      mono = mono * Poly::var("X" + std::to_string(g.pick(4)));
    p = p + mono;
  }
  return p;
}

}  // namespace

PropertyResult prop_semiring_laws_nat(unsigned long long seed, int count) {
  return semiring_laws<NatSemiring>(
      "semiring-laws-nat", seed, count,
      [](Gen& g) { return BigInt(g.pick(50)); });
}

PropertyResult prop_semiring_laws_bool(unsigned long long seed, int count) {
  return semiring_laws<BoolSemiring>("semiring-laws-bool", seed, count,
                                     [](Gen& g) { return g.coin(); });
}

PropertyResult prop_semiring_laws_poly(unsigned long long seed, int count) {
  return semiring_laws<PolySemiring>("semiring-laws-poly", seed, count,
                                     random_poly);
}

namespace {

struct SliceSetup {
  Instance inst;
  Store out;
  TracePtr trace;
  LabelSet written;
};

SliceSetup slice_setup(Gen& g) {
  SliceSetup s{random_instance(g, 4, 10), {}, nullptr, {}};
  FreshSupply supply = supply_for(s.inst.store);
  auto [out, trace] = traced_eval(s.inst.store, s.inst.dest, s.inst.core,
                                  supply);
  s.out = std::move(out);
  s.trace = trace;
  s.written = written_labels(trace);
  return s;
}

LabelSet random_subset(Gen& g, const LabelSet& pool, int max_size) {
  std::vector<Label> v(pool.begin(), pool.end());
  LabelSet out;
  if (v.empty()) return out;
  int n = 1 + g.pick(max_size);
  for (int i = 0; i < n; ++i)
    out.insert(v[g.pick(static_cast<int>(v.size()))]);
  return out;
}

}  // namespace

PropertyResult prop_slice_sufficiency(unsigned long long seed, int count) {
  return drive("backward-slice-sufficiency", seed, count, [](Gen& g) {
    SliceSetup s = slice_setup(g);
    LabelSet focus = random_subset(g, s.written, 2);
    if (focus.empty()) return;
    TracePtr sliced = backward_slice(s.trace, focus);
    if (!sliced) prop_fail("slice of written labels came back empty");

    // Replay on the input store plus the values of any pruned labels the
    // slice still mentions.
    Store replay_store = s.inst.store;
    LabelSet sliced_writes = written_labels(sliced);
    for (const Label& l : mentioned_labels(sliced)) {
      if (replay_store.contains(l) || sliced_writes.count(l)) continue;
      if (s.out.contains(l)) replay_store.bind(l, s.out.at(l));
    }
    FreshSupply supply = supply_for(s.out);
    auto [replayed, rt] = adapt(replay_store, sliced, supply);
    for (const Label& l : focus) {
      if (!sliced_writes.count(l)) continue;
      ValuePtr a = readback_infer(replayed, l);
      ValuePtr b = readback_infer(s.out, l);
      if (!value_equal(a, b))
        prop_fail("replayed value at " + l.name + " is " + to_string(a) +
                  ", expected " + to_string(b));
    }
  });
}

PropertyResult prop_slice_monotone(unsigned long long seed, int count) {
  return drive("backward-slice-monotone", seed, count, [](Gen& g) {
    SliceSetup s = slice_setup(g);
    LabelSet f1 = random_subset(g, s.written, 2);
    LabelSet f2 = f1;
    for (const Label& l : random_subset(g, s.written, 2)) f2.insert(l);
    TracePtr t1 = backward_slice(s.trace, f1);
    TracePtr t2 = backward_slice(s.trace, f2);
    if (!is_subtrace(t1, t2))
      prop_fail("slice of the smaller focus is not a subtrace");
    if (!is_subtrace(t2, s.trace))
      prop_fail("slice is not a subtrace of the original");
  });
}

PropertyResult prop_slice_duality(unsigned long long seed, int count) {
  return drive("slice-closure-duality", seed, count, [](Gen& g) {
    SliceSetup s = slice_setup(g);
    std::vector<Label> inputs;
    for (const auto& [l, k] : s.inst.store.cells()) inputs.push_back(l);
    if (inputs.empty()) return;
    Label a = inputs[g.pick(static_cast<int>(inputs.size()))];
    Label o = s.inst.dest;
    bool in_bwd = backward_closure(s.trace, {o}).count(a) != 0;
    bool in_fwd = forward_closure(s.trace, {a}).count(o) != 0;
    if (in_bwd != in_fwd)
      prop_fail("closure duality fails for input " + a.name + ": backward=" +
                (in_bwd ? "yes" : "no") + ", forward=" +
                (in_fwd ? "yes" : "no"));
  });
}

PropertyResult prop_slice_extraction(unsigned long long seed, int count) {
  return drive("slice-preserves-extraction", seed, count, [](Gen& g) {
    SliceSetup s = slice_setup(g);
    LabelSet focus = random_subset(g, s.written, 1);
    if (focus.empty()) return;
    Label f = *focus.begin();
    TracePtr sliced = backward_slice(s.trace, {f});
    if (!sliced) prop_fail("slice of a written label came back empty");

    AnnMap<WhereAnn> wh = identity_where(s.inst.store);
    WhereAnn full_w = ann_get(where_extract(wh, s.trace), f);
    WhereAnn slice_w = ann_get(where_extract(wh, sliced), f);
    if (full_w != slice_w) prop_fail("where-provenance changed under slicing");

    AnnMap<DepAnn> dh = identity_dep(s.inst.store);
    DepAnn full_d = ann_get(dep_extract(dh, s.trace), f);
    DepAnn slice_d = ann_get(dep_extract(dh, sliced), f);
    if (full_d != slice_d) prop_fail("dep-provenance changed under slicing");
  });
}

int run_property_suite(unsigned long long seed, int count) {
  std::vector<PropertyResult> results = {
      prop_consistency(seed, count),
      prop_fidelity(seed + 1, count),
      prop_extract_where(seed + 2, count),
      prop_extract_dep(seed + 3, count),
      prop_extract_semiring(seed + 4, count),
      prop_denotational_agreement(seed + 5, count),
      prop_eval_store_agreement(seed + 6, count),
      prop_roundtrip(seed + 7, count),
      prop_typecheck_mutation(seed + 8, count),
      prop_adapt_stability(seed + 9, count),
      prop_where_copy_chains(seed + 10, count),
      prop_bag_semantics(seed + 11, count),
      prop_semiring_laws_nat(seed + 12, count),
      prop_semiring_laws_bool(seed + 13, count),
      prop_semiring_laws_poly(seed + 14, count),
      prop_slice_sufficiency(seed + 15, count),
      prop_slice_monotone(seed + 16, count),
      prop_slice_duality(seed + 17, count),
      prop_slice_extraction(seed + 18, count),
  };
  bool all_ok = true;
  for (const PropertyResult& r : results) {
    std::cout << (r.ok() ? "PASS" : "FAIL") << " " << r.name << " ("
              << r.passed << "/" << r.total << ")";
    if (!r.ok()) std::cout << " -- " << r.first_failure;
    std::cout << "\n";
    all_ok = all_ok && r.ok();
  }
  return all_ok ? 0 : 1;
}

}  // namespace nrct
