#include "nrct/semiring.hpp"

#include <sstream>

namespace nrct {

std::string Poly::show() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (m.empty()) {
      os << c;
      continue;
    }
    if (c != 1) os << c << "*";
    bool firstv = true;
    for (const auto& [x, p] : m) {
      if (!firstv) os << "*";
      firstv = false;
      os << x;
      if (p != 1) os << "^" << p;
    }
  }
  return os.str();
}

}  // namespace nrct
