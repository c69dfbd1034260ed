#pragma once

#include <limits>
#include <vector>

#include "gevrey/field.hpp"

namespace gevrey {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

SpectralField forward_transform(const PhysicalField& f);
// Requires Hermitian symmetry to 1e-12 relative; throws CorruptedField otherwise.
PhysicalField inverse_transform(const SpectralField& f);

// Complex-valued samples of a (possibly non-Hermitian) spectral field.
std::vector<cplx> inverse_complex(const SpectralField& f, int component);
// Forward transform of complex samples, one vector per component.
SpectralField forward_complex(const Grid& g, const std::vector<std::vector<cplx>>& samples);

// Riemann-sum L^p norm of the pointwise Euclidean magnitude; p = kInf is the
// collocation max.
double lp_norm(const PhysicalField& f, double p);
// Same norm evaluated from coefficients. Hermitian fields use the real
// transform (Parseval for p = 2); others use complex samples.
double lp_norm(const SpectralField& f, double p);
double lp_norm_complex(const Grid& g, const std::vector<std::vector<cplx>>& samples, double p);

void check_exponent(double p, const char* name);

}  // namespace gevrey
