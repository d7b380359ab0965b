#include "nrct/json_io.hpp"

#include <fstream>
#include <sstream>

#include "nrct/error.hpp"
#include "nrct/lang.hpp"
#include "nrct/lexer.hpp"
#include "nrct/parser.hpp"

namespace nrct {

Json bigint_to_json(const BigInt& i) {
  static const BigInt lo = std::numeric_limits<std::int64_t>::min();
  static const BigInt hi = std::numeric_limits<std::int64_t>::max();
  if (i >= lo && i <= hi) return Json(static_cast<std::int64_t>(i));
  return Json(i.str());
}

BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  store_error("expected an integer (number or decimal string)");
}

Json constructor_to_json(const Constructor& k) {
  Json j;
  switch (k.kind) {
    case Constructor::Kind::Int:
      j["int"] = bigint_to_json(k.i);
      break;
    case Constructor::Kind::Bool:
      j["bool"] = k.b;
      break;
    case Constructor::Kind::Record: {
      Json fields = Json::object();
      for (const auto& [f, l] : k.fields) fields[f] = l.name;
      j["record"] = std::move(fields);
      break;
    }
    case Constructor::Kind::Coll: {
      Json elems = Json::object();
      for (const auto& [l, m] : k.coll.entries())
        elems[l.name] = bigint_to_json(m);
      j["coll"] = std::move(elems);
      break;
    }
  }
  return j;
}

Constructor constructor_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    store_error("constructor must be a one-key object");
  if (j.contains("int")) return Constructor::of_int(bigint_from_json(j["int"]));
  if (j.contains("bool")) {
    if (!j["bool"].is_boolean()) store_error("\"bool\" cell must hold a boolean");
    return Constructor::of_bool(j["bool"].get<bool>());
  }
  if (j.contains("record")) {
    std::vector<std::pair<std::string, Label>> fields;
    for (const auto& [f, v] : j["record"].items()) {
      if (!v.is_string()) store_error("record field must name a label");
      fields.emplace_back(f, Label(v.get<std::string>()));
    }
    return Constructor::of_record(std::move(fields));
  }
  if (j.contains("coll")) {
    LabelMultiset ms;
    for (const auto& [l, m] : j["coll"].items()) {
      BigInt mult = bigint_from_json(m);
      if (mult <= 0) store_error("multiplicity of " + l + " must be positive");
      ms.add(Label(l), mult);
    }
    return Constructor::of_coll(std::move(ms));
  }
  store_error("unknown constructor key in store file");
}

Json store_to_json(const Store& s, const std::optional<Label>& root) {
  Json j;
  if (root) j["root"] = root->name;
  Json labels = Json::object();
  for (const auto& [l, k] : s.cells()) labels[l.name] = constructor_to_json(k);
  j["labels"] = std::move(labels);
  return j;
}

StoreFile store_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("labels"))
    store_error("store file must be an object with a \"labels\" key");
  StoreFile out;
  if (j.contains("root")) out.root = Label(j["root"].get<std::string>());
  for (const auto& [name, cell] : j["labels"].items())
    out.store.bind(Label(name), constructor_from_json(cell));
  return out;
}

Json value_to_json(const ValuePtr& v) {
  switch (v->kind()) {
    case Value::Kind::Int:
      return Json{{"int", bigint_to_json(v->intval())}};
    case Value::Kind::Bool:
      return Json{{"bool", v->boolval()}};
    case Value::Kind::Record: {
      Json fields = Json::object();
      for (const auto& [f, fv] : v->fields()) fields[f] = value_to_json(fv);
      return Json{{"record", std::move(fields)}};
    }
    case Value::Kind::Bag: {
      Json elems = Json::array();
      for (const auto& [e, m] : v->bag())
        elems.push_back(Json{{"value", value_to_json(e)},
                             {"multiplicity", bigint_to_json(m)}});
      return Json{{"bag", std::move(elems)}};
    }
  }
  internal_error("unhandled value kind");
}

namespace {

Json term_to_json(const Term& t) {
  using K = Term::Kind;
  auto lab = [](const W& w) { return Json(w.lab.name); };
  switch (t.kind) {
    case K::IntLit:
      return Json{{"int", bigint_to_json(t.i)}};
    case K::BoolLit:
      return Json{{"bool", t.b}};
    case K::Plus:
      return Json{{"plus", Json::array({lab(t.a0), lab(t.a1)})}};
    case K::Eq:
      return Json{{"eq", Json::array({lab(t.a0), lab(t.a1)})}};
    case K::And:
      return Json{{"and", Json::array({lab(t.a0), lab(t.a1)})}};
    case K::Not:
      return Json{{"not", lab(t.a0)}};
    case K::Record: {
      Json fields = Json::object();
      for (const auto& [f, w] : t.fields) fields[f] = w.lab.name;
      return Json{{"record", std::move(fields)}};
    }
    case K::Copy:
      return Json{{"copy", lab(t.a0)}};
    case K::Empty:
      return Json{{"empty", t.elem ? Json(to_string(t.elem)) : Json(nullptr)}};
    case K::Singleton:
      return Json{{"singleton", lab(t.a0)}};
    case K::Union:
      return Json{{"union", Json::array({lab(t.a0), lab(t.a1)})}};
    case K::IsEmpty:
      return Json{{"isempty", lab(t.a0)}};
  }
  internal_error("unhandled term kind");
}

Term term_from_json(const Json& j) {
  auto wlab = [](const Json& v) { return W::mklab(Label(v.get<std::string>())); };
  if (j.contains("int")) return Term::int_lit(bigint_from_json(j["int"]));
  if (j.contains("bool")) return Term::bool_lit(j["bool"].get<bool>());
  if (j.contains("plus"))
    return Term::plus(wlab(j["plus"][0]), wlab(j["plus"][1]));
  if (j.contains("eq")) return Term::eq(wlab(j["eq"][0]), wlab(j["eq"][1]));
  if (j.contains("and"))
    return Term::logical_and(wlab(j["and"][0]), wlab(j["and"][1]));
  if (j.contains("not")) return Term::logical_not(wlab(j["not"]));
  if (j.contains("record")) {
    std::vector<std::pair<std::string, W>> fields;
    for (const auto& [f, v] : j["record"].items())
      fields.emplace_back(f, wlab(v));
    return Term::record(std::move(fields));
  }
  if (j.contains("copy")) return Term::copy(wlab(j["copy"]));
  if (j.contains("empty")) {
    TypePtr elem;
    if (j["empty"].is_string()) elem = parse_type(j["empty"].get<std::string>());
    return Term::empty(std::move(elem));
  }
  if (j.contains("singleton")) return Term::singleton(wlab(j["singleton"]));
  if (j.contains("union"))
    return Term::set_union(wlab(j["union"][0]), wlab(j["union"][1]));
  if (j.contains("isempty")) return Term::is_empty(wlab(j["isempty"]));
  store_error("unknown term in trace file");
}

Json expr_to_json(const CExprPtr& e) {
  return e ? Json(print_core(e)) : Json(nullptr);
}

CExprPtr expr_from_json(const Json& j) {
  if (j.is_null()) return nullptr;
  Lexer lex(j.get<std::string>(), /*allow_reserved=*/true);
  TokenStream ts(lex.tokens());
  SExprPtr s = parse_expr_at(ts, {});
  return core_of_surface_strict(s);
}

CExprPtr body_from_json(const Json& j, const std::string& var) {
  if (j.is_null()) return nullptr;
  Lexer lex(j.get<std::string>(), /*allow_reserved=*/true);
  TokenStream ts(lex.tokens());
  std::set<std::string> scope;
  if (!var.empty()) scope.insert(var);
  SExprPtr s = parse_expr_at(ts, scope);
  return core_of_surface_strict(s);
}

Json trace_node_to_json(const TracePtr& t) {
  switch (t->kind) {
    case Trace::Kind::Assign:
      return Json{{"assign",
                   Json{{"dest", t->dest.name}, {"term", term_to_json(t->term)}}}};
    case Trace::Kind::Proj:
      return Json{{"proj", Json{{"dest", t->dest.name},
                                {"field", t->field},
                                {"rec", t->rec.name},
                                {"rec_field", t->rec_field.name}}}};
    case Trace::Kind::Seq:
      return Json{{"seq", Json::array({trace_node_to_json(t->t1),
                                       trace_node_to_json(t->t2)})}};
    case Trace::Kind::Cond:
      return Json{{"cond", Json{{"test", t->test.name},
                                {"flag", t->flag},
                                {"sub", trace_node_to_json(t->sub)},
                                {"then", expr_to_json(t->e_then)},
                                {"else", expr_to_json(t->e_else)}}}};
    case Trace::Kind::Comp:
    case Trace::Kind::Sum: {
      Json entries = Json::array();
      for (const auto& e : t->theta)
        entries.push_back(Json{{"in", e.in.name},
                               {"mult", bigint_to_json(e.mult)},
                               {"trace", trace_node_to_json(e.tr)}});
      Json body = Json{{"dest", t->dest.name},
                       {"src", t->src.name},
                       {"var", t->var},
                       {"body", expr_to_json(t->body)},
                       {"theta", std::move(entries)}};
      return Json{{t->kind == Trace::Kind::Comp ? "comp" : "sum",
                   std::move(body)}};
    }
  }
  internal_error("unhandled trace kind");
}

TracePtr trace_node_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    store_error("trace node must be a one-key object");
  if (j.contains("assign")) {
    const Json& a = j["assign"];
    return Trace::assign(Label(a["dest"].get<std::string>()),
                         term_from_json(a["term"]));
  }
  if (j.contains("proj")) {
    const Json& p = j["proj"];
    return Trace::proj(Label(p["dest"].get<std::string>()),
                       p["field"].get<std::string>(),
                       Label(p["rec"].get<std::string>()),
                       Label(p["rec_field"].get<std::string>()));
  }
  if (j.contains("seq")) {
    const Json& s = j["seq"];
    return Trace::seq(trace_node_from_json(s[0]), trace_node_from_json(s[1]));
  }
  if (j.contains("cond")) {
    const Json& c = j["cond"];
    return Trace::cond(Label(c["test"].get<std::string>()),
                       c["flag"].get<bool>(), trace_node_from_json(c["sub"]),
                       expr_from_json(c["then"]), expr_from_json(c["else"]));
  }
  if (j.contains("comp") || j.contains("sum")) {
    bool is_comp = j.contains("comp");
    const Json& c = is_comp ? j["comp"] : j["sum"];
    Theta theta;
    for (const auto& e : c["theta"]) {
      theta.push_back({Label(e["in"].get<std::string>()),
                       trace_node_from_json(e["trace"]),
                       bigint_from_json(e["mult"])});
    }
    std::string var = c["var"].get<std::string>();
    CExprPtr body = body_from_json(c["body"], var);
    Label dest(c["dest"].get<std::string>());
    Label src(c["src"].get<std::string>());
    return is_comp ? Trace::comp(dest, src, std::move(theta), var, body)
                   : Trace::sum(dest, src, std::move(theta), var, body);
  }
  store_error("unknown trace node kind");
}

}  // namespace

Json trace_to_json(const TraceFile& tf) {
  Json j;
  j["format"] = "nrct-trace";
  j["dest"] = tf.dest.name;
  j["supply_next"] = tf.supply_next;
  j["query"] = tf.query ? Json(print_core(tf.query)) : Json(nullptr);
  j["input_store"] = store_to_json(tf.input_store, std::nullopt);
  j["trace"] = trace_node_to_json(tf.trace);
  return j;
}

TraceFile trace_file_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "nrct-trace")
    store_error("not a trace file (missing \"format\": \"nrct-trace\")");
  TraceFile tf;
  tf.dest = Label(j["dest"].get<std::string>());
  tf.supply_next = j["supply_next"].get<unsigned long long>();
  if (!j["query"].is_null()) tf.query = expr_from_json(j["query"]);
  tf.input_store = store_from_json(j["input_store"]).store;
  tf.trace = trace_node_from_json(j["trace"]);
  return tf;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) store_error("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    store_error(path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) store_error("cannot write " + path);
  out << content;
}

}  // namespace nrct
