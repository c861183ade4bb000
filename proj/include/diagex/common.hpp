#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace diagex {

// Exact integer weights: Moebius and Cf values grow factorially, so no
// fixed-width type is safe past n ~ 20.
using Weight = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown when an operation would exceed an enumeration cap or an explicit
// work budget. Input validation failures throw std::invalid_argument instead;
// the CLI maps the two to different exit codes.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kPartitionCap = 12;
inline constexpr int kUbpCap = 8;
inline constexpr int kSeriesOrderCap = 12;

inline constexpr double kDefaultTol = 1e-10;

inline Weight factorial(int n) {
  Weight r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace diagex
