#pragma once

#include <cmath>

#include "doctest.h"
#include "gevrey/field.hpp"

namespace gevrey::test {

// Scalar field c at +-k (Hermitian pair) on g.
inline SpectralField mode_pair(const Grid& g, std::array<int, 3> k, cplx c) {
  SpectralField f(g, 1);
  const auto m = g.flat(k);
  f.data[m] += c;
  for (auto& x : k) x = -x;
  f.data[g.flat(k)] += std::conj(c);
  return f;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace gevrey::test
