#pragma once

#include <cstdint>
#include <functional>

#include "gevrey/decomposition.hpp"

namespace gevrey {

// Enforce c(-xi) = conj c(xi) by averaging; Nyquist modes are zeroed.
void hermitian_symmetrize(SpectralField& f);

// Complex Gaussian coefficients times envelope(|xi|), zero mean, Hermitian.
SpectralField random_field(const Grid& g, int components,
                           const std::function<double(double)>& envelope, std::uint64_t seed);
// Envelope (1 + |xi|)^{-decay}.
SpectralField gaussian_spectrum(const Grid& g, int components, double decay, std::uint64_t seed);
// Envelope e^{-rate |xi|}.
SpectralField analytic_field(const Grid& g, int components, double rate, std::uint64_t seed);
// Random translate of the shell kernel sum_xi a_xi phi_j(xi) e^{i xi (x - x0)}
// with amplitudes a_xi = 1 + jitter * N(0,1); concentrates like a bump at x0.
SpectralField shell_kernel(const DyadicSystem& sys, int j, std::uint64_t seed, double jitter = 0.1);
// Random phases restricted to shell j.
SpectralField shell_random(const DyadicSystem& sys, int j, std::uint64_t seed);

}  // namespace gevrey
