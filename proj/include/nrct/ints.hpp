#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace nrct {

// Arbitrary-precision integers: query results are exact, sums never overflow.
using BigInt = boost::multiprecision::cpp_int;

}  // namespace nrct
