#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nrct/label.hpp"

namespace nrct {

class Type;
using TypePtr = std::shared_ptr<const Type>;

// int | bool | record of named fields | collection (multiset).
// Pairs are the 2-field record with fields "1","2". Field names are unique
// and kept in order.
class Type {
 public:
  enum class Kind { Int, Bool, Record, Coll };

  Kind kind() const { return kind_; }
  const std::vector<std::pair<std::string, TypePtr>>& fields() const {
    return fields_;
  }
  const TypePtr& elem() const { return elem_; }

  bool is_int() const { return kind_ == Kind::Int; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_record() const { return kind_ == Kind::Record; }
  bool is_coll() const { return kind_ == Kind::Coll; }

  // Null when the field does not exist.
  TypePtr field(const std::string& name) const;

  static TypePtr intty();
  static TypePtr boolty();
  static TypePtr record(std::vector<std::pair<std::string, TypePtr>> fields);
  static TypePtr coll(TypePtr elem);

 private:
  Kind kind_;
  std::vector<std::pair<std::string, TypePtr>> fields_;
  TypePtr elem_;

  explicit Type(Kind k) : kind_(k) {}
};

bool type_equal(const TypePtr& a, const TypePtr& b);
std::string to_string(const TypePtr& t);

// Store typing: label -> type.
using StoreType = std::map<Label, TypePtr>;

// Typing context for expressions: a store type plus ordered variable
// bindings (later bindings shadow earlier ones).
struct Context {
  StoreType store;
  std::vector<std::pair<std::string, TypePtr>> vars;

  TypePtr lookup_var(const std::string& x) const;
  TypePtr lookup_label(const Label& l) const;
  Context extend(const std::string& x, TypePtr t) const;
};

}  // namespace nrct
