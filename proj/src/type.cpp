#include "nrct/type.hpp"

#include <sstream>

namespace nrct {

TypePtr Type::field(const std::string& name) const {
  for (const auto& [f, t] : fields_)
    if (f == name) return t;
  return nullptr;
}

TypePtr Type::intty() {
  static const TypePtr t(new Type(Kind::Int));
  return t;
}

TypePtr Type::boolty() {
  static const TypePtr t(new Type(Kind::Bool));
  return t;
}

TypePtr Type::record(std::vector<std::pair<std::string, TypePtr>> fields) {
  auto* t = new Type(Kind::Record);
  t->fields_ = std::move(fields);
  return TypePtr(t);
}

TypePtr Type::coll(TypePtr elem) {
  auto* t = new Type(Kind::Coll);
  t->elem_ = std::move(elem);
  return TypePtr(t);
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Type::Kind::Int:
    case Type::Kind::Bool:
      return true;
    case Type::Kind::Record: {
      const auto& fa = a->fields();
      const auto& fb = b->fields();
      if (fa.size() != fb.size()) return false;
      for (size_t i = 0; i < fa.size(); ++i) {
        if (fa[i].first != fb[i].first) return false;
        if (!type_equal(fa[i].second, fb[i].second)) return false;
      }
      return true;
    }
    case Type::Kind::Coll:
      return type_equal(a->elem(), b->elem());
  }
  return false;
}

std::string to_string(const TypePtr& t) {
  if (!t) return "<none>";
  std::ostringstream os;
  switch (t->kind()) {
    case Type::Kind::Int:
      os << "int";
      break;
    case Type::Kind::Bool:
      os << "bool";
      break;
    case Type::Kind::Record: {
      os << "(";
      bool first = true;
      for (const auto& [f, ft] : t->fields()) {
        if (!first) os << ", ";
        first = false;
        os << f << ": " << to_string(ft);
      }
      os << ")";
      break;
    }
    case Type::Kind::Coll:
      os << "{" << to_string(t->elem()) << "}";
      break;
  }
  return os.str();
}

TypePtr Context::lookup_var(const std::string& x) const {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    if (it->first == x) return it->second;
  return nullptr;
}

TypePtr Context::lookup_label(const Label& l) const {
  auto it = store.find(l);
  return it == store.end() ? nullptr : it->second;
}

Context Context::extend(const std::string& x, TypePtr t) const {
  Context c = *this;
  c.vars.emplace_back(x, std::move(t));
  return c;
}

}  // namespace nrct
