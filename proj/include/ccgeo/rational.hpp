#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ccgeo {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "3", "-2", "3/2" or decimal strings like "0.25" into an exact rational.
Rat parse_rat(const std::string& text);

// Canonical rendering: integers as "n", otherwise "p/q".
std::string format_rat(const Rat& r);

// Largest integer <= r.
BigInt rat_floor(const Rat& r);

// Smallest integer >= r.
BigInt rat_ceil(const Rat& r);

inline int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min())
    throw std::overflow_error("value exceeds 64-bit range");
  return static_cast<int64_t>(v);
}

}  // namespace ccgeo
