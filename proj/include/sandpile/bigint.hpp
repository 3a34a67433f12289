#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace sandpile {

/// Exact arbitrary-precision integer; counts must never round.
using BigInt = boost::multiprecision::cpp_int;

}  // namespace sandpile
