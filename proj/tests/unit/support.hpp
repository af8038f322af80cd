#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>

namespace testing {

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Plain O(q) count of units; the oracle for euler_phi.
inline std::uint64_t count_units(std::uint64_t q) {
  std::uint64_t c = 0;
  for (std::uint64_t a = 1; a <= q; ++a)
    if (std::gcd(a, q) == 1) ++c;
  return c;
}

}  // namespace testing
