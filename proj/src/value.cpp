#include "nrct/value.hpp"

#include <algorithm>
#include <sstream>

namespace nrct {

ValuePtr Value::field(const std::string& name) const {
  for (const auto& [f, v] : fields_)
    if (f == name) return v;
  return nullptr;
}

ValuePtr Value::of_int(BigInt i) {
  auto* v = new Value(Kind::Int);
  v->int_ = std::move(i);
  return ValuePtr(v);
}

ValuePtr Value::of_bool(bool b) {
  auto* v = new Value(Kind::Bool);
  v->bool_ = b;
  return ValuePtr(v);
}

ValuePtr Value::record(std::vector<std::pair<std::string, ValuePtr>> fields) {
  auto* v = new Value(Kind::Record);
  v->fields_ = std::move(fields);
  return ValuePtr(v);
}

ValuePtr Value::bag_of(std::vector<std::pair<ValuePtr, BigInt>> elems) {
  std::sort(elems.begin(), elems.end(), [](const auto& a, const auto& b) {
    return value_cmp(a.first, b.first) < 0;
  });
  std::vector<std::pair<ValuePtr, BigInt>> merged;
  for (auto& [v, m] : elems) {
    if (m == 0) continue;
    if (!merged.empty() && value_cmp(merged.back().first, v) == 0)
      merged.back().second += m;
    else
      merged.emplace_back(v, m);
  }
  auto* out = new Value(Kind::Bag);
  out->bag_ = std::move(merged);
  return ValuePtr(out);
}

int value_cmp(const ValuePtr& a, const ValuePtr& b) {
  if (a->kind() != b->kind())
    return static_cast<int>(a->kind()) < static_cast<int>(b->kind()) ? -1 : 1;
  switch (a->kind()) {
    case Value::Kind::Int:
      if (a->intval() == b->intval()) return 0;
      return a->intval() < b->intval() ? -1 : 1;
    case Value::Kind::Bool:
      if (a->boolval() == b->boolval()) return 0;
      return a->boolval() < b->boolval() ? -1 : 1;
    case Value::Kind::Record: {
      const auto& fa = a->fields();
      const auto& fb = b->fields();
      if (fa.size() != fb.size()) return fa.size() < fb.size() ? -1 : 1;
      for (size_t i = 0; i < fa.size(); ++i) {
        if (fa[i].first != fb[i].first)
          return fa[i].first < fb[i].first ? -1 : 1;
        if (int c = value_cmp(fa[i].second, fb[i].second)) return c;
      }
      return 0;
    }
    case Value::Kind::Bag: {
      const auto& ba = a->bag();
      const auto& bb = b->bag();
      if (ba.size() != bb.size()) return ba.size() < bb.size() ? -1 : 1;
      for (size_t i = 0; i < ba.size(); ++i) {
        if (int c = value_cmp(ba[i].first, bb[i].first)) return c;
        if (ba[i].second != bb[i].second)
          return ba[i].second < bb[i].second ? -1 : 1;
      }
      return 0;
    }
  }
  return 0;
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  return value_cmp(a, b) == 0;
}

std::string to_string(const ValuePtr& v) {
  std::ostringstream os;
  switch (v->kind()) {
    case Value::Kind::Int:
      os << v->intval();
      break;
    case Value::Kind::Bool:
      os << (v->boolval() ? "true" : "false");
      break;
    case Value::Kind::Record: {
      os << "(";
      bool first = true;
      for (const auto& [f, fv] : v->fields()) {
        if (!first) os << ", ";
        first = false;
        os << f << ": " << to_string(fv);
      }
      os << ")";
      break;
    }
    case Value::Kind::Bag: {
      os << "{";
      bool first = true;
      for (const auto& [e, m] : v->bag()) {
        if (!first) os << ", ";
        first = false;
        os << to_string(e);
        if (m != 1) os << ": " << m;
      }
      os << "}";
      break;
    }
  }
  return os.str();
}

}  // namespace nrct
