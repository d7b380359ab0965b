// Command-line driver: evaluate queries over labeled stores with tracing,
// adapt traces to edited inputs, extract provenance from traces, and slice
// traces.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nrct/adapt.hpp"
#include "nrct/error.hpp"
#include "nrct/eval.hpp"
#include "nrct/generator.hpp"
#include "nrct/json_io.hpp"
#include "nrct/lang.hpp"
#include "nrct/parser.hpp"
#include "nrct/property_suite.hpp"
#include "nrct/provenance.hpp"
#include "nrct/slice.hpp"
#include "nrct/trace.hpp"

namespace fs = std::filesystem;
using namespace nrct;

namespace {

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Syntax:
    case ErrorKind::Type:
      return 1;
    case ErrorKind::StoreFormat:
      return 2;
    case ErrorKind::Edit:
      return 4;
    case ErrorKind::Internal:
      return 3;
  }
  return 3;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) store_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

StoreType store_type_or_fail(const Store& sigma) {
  std::string diag;
  auto psi = infer_store_type(sigma, {}, &diag);
  if (!psi) store_error("ill-typed store: " + diag);
  return *psi;
}

struct RunArtifacts {
  Store result_store;
  TracePtr trace;
  TypePtr type;
  CExprPtr core;
  Label dest;
  unsigned long long supply_next = 0;
};

RunArtifacts run_query(const std::string& query_text, const Store& sigma,
                       const Label& dest, unsigned long long seed) {
  StoreType psi = store_type_or_fail(sigma);
  if (sigma.contains(dest))
    store_error("destination label " + dest.name + " is bound in the store");

  SExprPtr surface = parse_expr(query_text);
  Context ctx;
  ctx.store = psi;
  auto [type, annotated] = surface_typecheck(ctx, surface);
  CExprPtr core = anormalize(desugar(annotated));

  FreshSupply supply(seed);
  for (const auto& [l, k] : sigma.cells()) supply.avoid(l);
  auto [out, trace] = traced_eval(sigma, dest, core, supply);

  return {std::move(out), std::move(trace), type, core, dest,
          supply.next_index()};
}

void emit_run_artifacts(const RunArtifacts& run, const Store& input,
                        const std::string& stem, const std::string& out_dir,
                        const std::string& emit) {
  fs::create_directories(out_dir);
  auto path = [&](const std::string& suffix) {
    return (fs::path(out_dir) / (stem + suffix)).string();
  };
  bool all = emit == "all";
  if (all || emit == "value") {
    ValuePtr v = readback(run.result_store, run.type, run.dest);
    Json j;
    j["type"] = to_string(run.type);
    j["value"] = value_to_json(v);
    write_text_file(path(".value.json"), j.dump(2) + "\n");
    std::cout << to_string(v) << "\n";
  }
  if (all || emit == "trace") {
    write_text_file(path(".trace.txt"), trace_to_text(run.trace));
    TraceFile tf{run.trace, input, run.dest, run.core, run.supply_next};
    write_text_file(path(".trace.json"), trace_to_json(tf).dump(2) + "\n");
  }
  if (all || emit == "dot")
    write_text_file(path(".dot"), trace_to_dot(run.trace));
  write_text_file(
      path(".store.json"),
      store_to_json(run.result_store, run.dest).dump(2) + "\n");
}

// --- provenance serialization -------------------------------------------

Json where_ann_json(const AnnMap<WhereAnn>& h) {
  Json out = Json::object();
  for (const auto& [l, a] : h) out[l.name] = a ? Json(a->name) : Json(nullptr);
  return out;
}

Json dep_ann_json(const AnnMap<DepAnn>& h) {
  Json out = Json::object();
  for (const auto& [l, a] : h) {
    Json arr = Json::array();
    for (const Label& t : a) arr.push_back(t.name);
    out[l.name] = std::move(arr);
  }
  return out;
}

Poly poly_from_json(const Json& j) {
  if (j.is_string()) return Poly::var(j.get<std::string>());
  if (j.is_number_integer()) return Poly::constant(bigint_from_json(j));
  if (j.is_array()) {
    Poly p;
    for (const auto& term : j) {
      Poly mono = Poly::constant(term.contains("coeff")
                                     ? bigint_from_json(term["coeff"])
                                     : BigInt(1));
      if (term.contains("vars"))
        for (const auto& [x, pow] : term["vars"].items())
          for (int i = 0; i < pow.get<int>(); ++i) mono = mono * Poly::var(x);
      p = p + mono;
    }
    return p;
  }
  store_error("bad polynomial in annotation file");
}

Json poly_to_json(const Poly& p) {
  Json arr = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json vars = Json::object();
    for (const auto& [x, pow] : m) vars[x] = pow;
    arr.push_back(Json{{"coeff", bigint_to_json(c)}, {"vars", std::move(vars)}});
  }
  return arr;
}

template <class S, class FromJson, class ToJson>
Json k_provenance(const TraceFile& tf, const Json* assignments, bool oracle,
                  FromJson&& from_json, ToJson&& to_json) {
  KAnnMap<S> h;
  if (assignments) {
    h = initial_k_annotations<S>(
        tf.input_store,
        [](const Label&, const Label&, const BigInt&) { return S::zero(); });
    for (const auto& [lname, elems] : assignments->items()) {
      KCollection<S> kc;
      for (const auto& [el, kj] : elems.items())
        kc.add(Label(el), from_json(kj));
      h[Label(lname)] = std::move(kc);
    }
  } else {
    h = initial_k_annotations<S>(
        tf.input_store, [](const Label&, const Label& el, const BigInt&) {
          if constexpr (std::is_same_v<S, PolySemiring>)
            return Poly::var(el.name);
          else
            return S::one();
        });
  }

  KAnnMap<S> extracted = k_extract<S>(h, tf.trace);
  Json out = Json::object();
  for (const auto& [l, a] : extracted) {
    if (!a) {
      out[l.name] = nullptr;
      continue;
    }
    Json coll = Json::object();
    for (const auto& [el, k] : a->support()) coll[el.name] = to_json(k);
    out[l.name] = std::move(coll);
  }

  if (oracle) {
    if (!tf.query) store_error("trace file lacks the query; cannot run oracle");
    FreshSupply supply;
    for (const auto& [l, k] : tf.input_store.cells()) supply.avoid(l);
    auto [os, oh] = k_eval<S>(tf.input_store, h, tf.dest, tf.query, supply);
    bool match = oh == extracted;
    std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
    if (!match) internal_error("extraction disagrees with the oracle");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested relational calculus engine with provenance traces"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  auto* run = app.add_subcommand("run", "evaluate a query with tracing");
  std::string run_query_path, run_store_path, run_schema_path;
  std::string run_emit = "all", run_out_dir = ".", run_dest = "out";
  unsigned long long run_seed = 0;
  run->add_option("query", run_query_path, "query file (.nrc)")->required();
  run->add_option("store", run_store_path, "store file (.json)")->required();
  run->add_option("--schema", run_schema_path,
                  "store type to validate the store against (.json)");
  run->add_option("--emit", run_emit, "value|trace|dot|all")
      ->check(CLI::IsMember({"value", "trace", "dot", "all"}));
  run->add_option("--out-dir", run_out_dir, "artifact directory");
  run->add_option("--dest", run_dest, "destination label");
  run->add_option("--seed", run_seed, "fresh-label supply start");

  // --- adapt -------------------------------------------------------------
  auto* adapt_cmd = app.add_subcommand("adapt", "replay a trace on an edited store");
  std::string adapt_trace_path, adapt_edits_path, adapt_out_dir = ".";
  adapt_cmd->add_option("--trace", adapt_trace_path, "trace file (.trace.json)")
      ->required();
  adapt_cmd->add_option("--edits", adapt_edits_path, "edit script (.json)")
      ->required();
  adapt_cmd->add_option("--out-dir", adapt_out_dir, "artifact directory");

  // --- provenance ----------------------------------------------------------
  auto* prov = app.add_subcommand("provenance", "extract provenance from a trace");
  std::string prov_trace_path, prov_kind, prov_instance = "poly";
  std::string prov_ann_path, prov_out_path;
  bool prov_oracle = false;
  prov->add_option("--trace", prov_trace_path, "trace file")->required();
  prov->add_option("--kind", prov_kind, "where|dep|semiring")
      ->required()
      ->check(CLI::IsMember({"where", "dep", "semiring"}));
  prov->add_option("--instance", prov_instance, "nat|bool|poly")
      ->check(CLI::IsMember({"nat", "bool", "poly"}));
  prov->add_option("--annotations", prov_ann_path, "initial annotations (.json)");
  prov->add_option("--out", prov_out_path, "output file (default stdout)");
  prov->add_flag("--check-oracle", prov_oracle,
                 "also run the annotated semantics and diff");

  // --- slice ---------------------------------------------------------------
  auto* slice_cmd = app.add_subcommand("slice", "slice a trace");
  std::string slice_trace_path, slice_back, slice_fwd, slice_emit = "text";
  std::string slice_out_path;
  bool slice_simplify = false;
  slice_cmd->add_option("--trace", slice_trace_path, "trace file")->required();
  slice_cmd->add_option("--slice-backward", slice_back,
                        "comma-separated focus labels");
  slice_cmd->add_option("--slice-forward", slice_fwd,
                        "comma-separated focus labels");
  slice_cmd->add_flag("--simplify", slice_simplify, "emit the simplified view");
  slice_cmd->add_option("--emit", slice_emit, "text|dot")
      ->check(CLI::IsMember({"text", "dot"}));
  slice_cmd->add_option("--out", slice_out_path, "output file (default stdout)");

  // --- check -----------------------------------------------------------------
  auto* check = app.add_subcommand("check", "run the randomized property suite");
  unsigned long long check_seed = 1;
  int check_count = 100;
  check->add_option("--seed", check_seed, "generator seed");
  check->add_option("--count", check_count, "instances per property");

  // --- load-table -------------------------------------------------------------
  auto* load = app.add_subcommand("load-table", "turn a CSV table into store cells");
  std::string load_name, load_csv, load_out = "store.json", load_append;
  load->add_option("name", load_name, "table label")->required();
  load->add_option("csv", load_csv, "input CSV (header row = field names)")
      ->required();
  load->add_option("--out", load_out, "store file to write");
  load->add_option("--append", load_append, "existing store file to extend");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      StoreFile sf = store_from_json(load_json_file(run_store_path));
      if (!run_schema_path.empty()) {
        StoreType declared;
        for (const auto& [l, ty] :
             load_json_file(run_schema_path).items())
          declared[Label(l)] = parse_type(ty.get<std::string>());
        std::string diag;
        if (!store_typecheck(declared, sf.store, &diag))
          store_error("store does not match schema: " + diag);
      }
      RunArtifacts arts = run_query(slurp(run_query_path), sf.store,
                                    Label(run_dest), run_seed);
      std::string stem = fs::path(run_query_path).stem().string();
      emit_run_artifacts(arts, sf.store, stem, run_out_dir, run_emit);
      return 0;
    }

    if (*adapt_cmd) {
      TraceFile tf = trace_file_from_json(load_json_file(adapt_trace_path));
      EditScript edits =
          edit_script_from_json(load_json_file(adapt_edits_path));
      Store edited = apply_edits(tf.input_store, edits);
      check_edits_legal(tf.input_store, edited, tf.trace);

      FreshSupply supply(tf.supply_next);
      for (const auto& [l, k] : edited.cells()) supply.avoid(l);
      auto [out_store, out_trace] = adapt(edited, tf.trace, supply);

      fs::create_directories(adapt_out_dir);
      std::string stem =
          fs::path(adapt_trace_path).stem().stem().string() + ".adapted";
      auto path = [&](const std::string& suffix) {
        return (fs::path(adapt_out_dir) / (stem + suffix)).string();
      };
      write_text_file(path(".trace.txt"), trace_to_text(out_trace));
      TraceFile out_tf{out_trace, edited, tf.dest, tf.query,
                       supply.next_index()};
      write_text_file(path(".trace.json"), trace_to_json(out_tf).dump(2) + "\n");
      write_text_file(path(".store.json"),
                      store_to_json(out_store, tf.dest).dump(2) + "\n");
      ValuePtr v = readback_infer(out_store, tf.dest);
      std::cout << to_string(v) << "\n";

      if (tf.query) {
        FidelityReport report;
        report = run_fidelity_check(tf.query, tf.input_store, edits, tf.dest);
        bool unchanged = edits.empty();
        std::ostringstream line;
        line << (unchanged ? "unchanged; " : "")
             << "fidelity " << (report.pass ? "PASS" : "FAIL");
        std::cout << line.str() << "\n";
        write_text_file(path(".fidelity.txt"),
                        line.str() + "\n" + report.detail);
        if (!report.pass) return 3;
      }
      return 0;
    }

    if (*prov) {
      TraceFile tf = trace_file_from_json(load_json_file(prov_trace_path));
      Json ann_file;
      const Json* assignments = nullptr;
      if (!prov_ann_path.empty()) {
        ann_file = load_json_file(prov_ann_path);
        if (ann_file.contains("kind") &&
            ann_file["kind"].get<std::string>() != prov_kind)
          store_error("annotation file kind differs from --kind");
        if (ann_file.contains("instance"))
          prov_instance = ann_file["instance"].get<std::string>();
        if (ann_file.contains("assignments"))
          assignments = &ann_file["assignments"];
      }

      Json result;
      if (prov_kind == "where") {
        AnnMap<WhereAnn> h = identity_where(tf.input_store);
        if (assignments)
          for (const auto& [l, tok] : assignments->items())
            h[Label(l)] = tok.is_null()
                              ? WhereAnn{}
                              : WhereAnn{Label(tok.get<std::string>())};
        AnnMap<WhereAnn> extracted = where_extract(h, tf.trace);
        result = where_ann_json(extracted);
        if (prov_oracle) {
          if (!tf.query)
            store_error("trace file lacks the query; cannot run oracle");
          FreshSupply supply;
          for (const auto& [l, k] : tf.input_store.cells()) supply.avoid(l);
          auto [os, oh] =
              where_eval(tf.input_store, h, tf.dest, tf.query, supply);
          bool match = oh == extracted;
          std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
          if (!match) internal_error("extraction disagrees with the oracle");
        }
      } else if (prov_kind == "dep") {
        AnnMap<DepAnn> h = identity_dep(tf.input_store);
        if (assignments)
          for (const auto& [l, toks] : assignments->items()) {
            DepAnn a;
            for (const auto& tok : toks) a.insert(Label(tok.get<std::string>()));
            h[Label(l)] = std::move(a);
          }
        AnnMap<DepAnn> extracted = dep_extract(h, tf.trace);
        result = dep_ann_json(extracted);
        if (prov_oracle) {
          if (!tf.query)
            store_error("trace file lacks the query; cannot run oracle");
          FreshSupply supply;
          for (const auto& [l, k] : tf.input_store.cells()) supply.avoid(l);
          auto [os, oh] =
              dep_eval(tf.input_store, h, tf.dest, tf.query, supply);
          bool match = oh == extracted;
          std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
          if (!match) internal_error("extraction disagrees with the oracle");
        }
      } else {
        if (prov_instance == "nat") {
          result = k_provenance<NatSemiring>(
              tf, assignments, prov_oracle,
              [](const Json& j) { return bigint_from_json(j); },
              [](const BigInt& k) { return bigint_to_json(k); });
        } else if (prov_instance == "bool") {
          result = k_provenance<BoolSemiring>(
              tf, assignments, prov_oracle,
              [](const Json& j) { return j.get<bool>(); },
              [](bool k) { return Json(k); });
        } else {
          result = k_provenance<PolySemiring>(
              tf, assignments, prov_oracle, poly_from_json,
              [](const Poly& p) { return poly_to_json(p); });
        }
      }

      Json out;
      out["kind"] = prov_kind;
      if (prov_kind == "semiring") out["instance"] = prov_instance;
      out["annotations"] = std::move(result);
      std::string text = out.dump(2) + "\n";
      if (prov_out_path.empty())
        std::cout << text;
      else
        write_text_file(prov_out_path, text);
      return 0;
    }

    if (*slice_cmd) {
      if (slice_back.empty() == slice_fwd.empty())
        type_error("choose exactly one of --slice-backward / --slice-forward");
      TraceFile tf = trace_file_from_json(load_json_file(slice_trace_path));

      LabelSet known = mentioned_labels(tf.trace);
      for (const auto& [l, k] : tf.input_store.cells()) known.insert(l);
      LabelSet focus;
      std::stringstream ss(slice_back.empty() ? slice_fwd : slice_back);
      for (std::string name; std::getline(ss, name, ',');) {
        if (name.empty()) continue;
        if (!known.count(Label(name)))
          type_error("unknown focus label " + name);
        focus.insert(Label(name));
      }

      TracePtr sliced = slice_back.empty()
                            ? forward_slice(tf.trace, focus)
                            : backward_slice(tf.trace, focus);
      std::string text;
      if (!sliced) {
        text = "empty\n";
      } else if (slice_simplify) {
        SimplifiedView view = simplify(sliced);
        text = simplified_to_text(view);
        text += "residue: " + print_surface(view.residue) + "\n";
      } else if (slice_emit == "dot") {
        text = trace_to_dot(sliced);
      } else {
        text = trace_to_text(sliced);
      }
      if (slice_out_path.empty())
        std::cout << text;
      else
        write_text_file(slice_out_path, text);
      return 0;
    }

    if (*check) return run_property_suite(check_seed, check_count);

    if (*load) {
      Store store;
      std::optional<Label> root;
      if (!load_append.empty()) {
        StoreFile sf = store_from_json(load_json_file(load_append));
        store = sf.store;
        root = sf.root;
      }
      std::ifstream in(load_csv);
      if (!in) store_error("cannot open " + load_csv);
      std::string line;
      if (!std::getline(in, line)) store_error("empty CSV " + load_csv);
      auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        for (std::string cell; std::getline(ss, cell, ',');) {
          while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
            cell.pop_back();
          while (!cell.empty() && cell.front() == ' ') cell.erase(0, 1);
          out.push_back(cell);
        }
        return out;
      };
      std::vector<std::string> header = split(line);
      LabelMultiset rows;
      int row_index = 0;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row_index;
        std::vector<std::string> cells = split(line);
        if (cells.size() != header.size())
          store_error("row " + std::to_string(row_index) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
        std::string row_prefix = load_name + std::to_string(row_index);
        std::vector<std::pair<std::string, Label>> fields;
        for (size_t c = 0; c < cells.size(); ++c) {
          Label cell_label(row_prefix + std::to_string(c + 1));
          Constructor k = (cells[c] == "true" || cells[c] == "false")
                              ? Constructor::of_bool(cells[c] == "true")
                              : Constructor::of_int(BigInt(cells[c]));
          store.bind(cell_label, std::move(k));
          fields.emplace_back(header[c], cell_label);
        }
        Label row_label(row_prefix);
        store.bind(row_label, Constructor::of_record(std::move(fields)));
        rows.add(row_label, 1);
      }
      store.bind(Label(load_name), Constructor::of_coll(std::move(rows)));
      write_text_file(load_out, store_to_json(store, root).dump(2) + "\n");
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
