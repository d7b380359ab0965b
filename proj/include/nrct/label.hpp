#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>

namespace nrct {

// A label addresses one constructor in a store and doubles as a trace
// location. Labels are ordered lexicographically so that printing and
// iteration are canonical.
struct Label {
  std::string name;

  Label() = default;
  explicit Label(std::string n) : name(std::move(n)) {}

  auto operator<=>(const Label&) const = default;
};

inline std::string to_string(const Label& l) { return l.name; }

using LabelSet = std::set<Label>;

// Deterministic source of fresh labels. Generated labels use the reserved
// "%" prefix, which the expression parser never produces, so they cannot
// collide with user-supplied labels.
class FreshSupply {
 public:
  FreshSupply() = default;
  explicit FreshSupply(unsigned long long next) : next_(next) {}

  Label fresh() { return Label("%" + std::to_string(next_++)); }

  unsigned long long next_index() const { return next_; }

  // Bumps the counter past any reserved label already present in `l`,
  // keeping the supply disjoint from labels loaded back from artifacts.
  void avoid(const Label& l);

  static bool is_reserved(const Label& l) {
    return !l.name.empty() && l.name[0] == '%';
  }

 private:
  unsigned long long next_ = 0;
};

inline void FreshSupply::avoid(const Label& l) {
  if (!is_reserved(l)) return;
  unsigned long long v = 0;
  for (size_t i = 1; i < l.name.size(); ++i) {
    char c = l.name[i];
    if (c < '0' || c > '9') return;
    v = v * 10 + static_cast<unsigned long long>(c - '0');
  }
  if (v >= next_) next_ = v + 1;
}

}  // namespace nrct
