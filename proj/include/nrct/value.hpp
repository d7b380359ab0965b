#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nrct/ints.hpp"

namespace nrct {

class Value;
using ValuePtr = std::shared_ptr<const Value>;

// A label-free nested value: integer, boolean, record, or bag. Bags keep a
// canonical sorted (value, multiplicity) representation so that equality is
// insertion-order independent.
class Value {
 public:
  enum class Kind { Int, Bool, Record, Bag };

  Kind kind() const { return kind_; }
  const BigInt& intval() const { return int_; }
  bool boolval() const { return bool_; }
  const std::vector<std::pair<std::string, ValuePtr>>& fields() const {
    return fields_;
  }
  const std::vector<std::pair<ValuePtr, BigInt>>& bag() const { return bag_; }

  ValuePtr field(const std::string& name) const;

  static ValuePtr of_int(BigInt i);
  static ValuePtr of_bool(bool b);
  static ValuePtr record(std::vector<std::pair<std::string, ValuePtr>> fields);
  // Normalizes: merges duplicates, drops zero multiplicities, sorts.
  static ValuePtr bag_of(std::vector<std::pair<ValuePtr, BigInt>> elems);

 private:
  Kind kind_;
  BigInt int_;
  bool bool_ = false;
  std::vector<std::pair<std::string, ValuePtr>> fields_;
  std::vector<std::pair<ValuePtr, BigInt>> bag_;

  explicit Value(Kind k) : kind_(k) {}
};

// Total order; bags compare by their canonical form.
int value_cmp(const ValuePtr& a, const ValuePtr& b);
bool value_equal(const ValuePtr& a, const ValuePtr& b);
std::string to_string(const ValuePtr& v);

}  // namespace nrct
