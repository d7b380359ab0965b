#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nrct/store.hpp"
#include "nrct/trace.hpp"
#include "nrct/value.hpp"

namespace nrct {

// Object key order is significant for record constructors.
using Json = nlohmann::ordered_json;

Json bigint_to_json(const BigInt& i);
BigInt bigint_from_json(const Json& j);

// Store files: {"root": "...", "labels": {"l": {"int": 5} | {"bool": true}
//   | {"record": {"A": "l1", ...}} | {"coll": {"l1": 2, ...}}}}
Json constructor_to_json(const Constructor& k);
Constructor constructor_from_json(const Json& j);

struct StoreFile {
  Store store;
  std::optional<Label> root;
};

Json store_to_json(const Store& s, const std::optional<Label>& root);
StoreFile store_from_json(const Json& j);

Json value_to_json(const ValuePtr& v);

// Lossless trace artifact: the trace with expression annotations, the input
// store it was produced from, the destination, the originating core
// expression, and the fresh-label watermark, so adaptation can run in a
// separate process.
struct TraceFile {
  TracePtr trace;
  Store input_store;
  Label dest;
  CExprPtr query;  // may be null for hand-written traces
  unsigned long long supply_next = 0;
};

Json trace_to_json(const TraceFile& tf);
TraceFile trace_file_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nrct
