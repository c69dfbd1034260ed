#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gevrey/spaces.hpp"

namespace gevrey {

void check_alpha(double alpha);

// |xi|^{2 alpha} on the lattice.
std::vector<double> dissipation_symbol(const Grid& g, double alpha);

SpectralField apply_semigroup(const SpectralField& u0, double t, double alpha);

// Exact integral of e^{-(t - tau) lambda} against a forcing that is linear in
// tau on [a, a + h]: returns {w_a, w_b} with z = lambda h.
std::array<double, 2> etd_weights(double z, double h);
double phi1(double z);
double phi2(double z);

// int_0^t U(t - tau) f(tau) d tau with f piecewise linear between trace samples.
SpectralField duhamel(const EvolutionTrace& forcing, double t, double alpha);
// The same integral evaluated at every trace time (first entry is zero).
std::vector<SpectralField> duhamel_trace(const EvolutionTrace& forcing, double alpha);

// t_0 = 0 followed by M - 1 geometrically spaced points ending at T.
std::vector<double> geometric_time_grid(double T, int M, double first_fraction = 1e-6);

struct BlockDecay {
  double measured = 0.0;
  double bound_rate = 0.0;
  bool ok() const { return measured <= bound_rate * (1.0 + 1e-12); }
};

// Random data supported in dyadic shell j (or uniform cube k); compares
// ||block U(t) f||_inf / ||block f||_inf with e^{-t r_in^{2 alpha}}.
BlockDecay block_decay_dyadic(int j, double t, double alpha, const DyadicSystem& sys,
                              std::uint64_t seed);
BlockDecay block_decay_uniform(const std::array<int, 3>& k, double t, double alpha,
                               const UniformSystem& sys, std::uint64_t seed);

// Chemin-Lerner norm of the trace {e^{theta(t) Lambda} U(t) u0 : t in t_grid}.
double weighted_semigroup_norm(const SpectralField& u0, const std::vector<double>& t_grid,
                               double alpha, const WeightSpec& weight, const NormSpec& norm);
// The weighted trace itself (combined exponent evaluated directly).
EvolutionTrace weighted_semigroup_trace(const SpectralField& u0, const std::vector<double>& t_grid,
                                        double alpha, const WeightSpec& weight);

}  // namespace gevrey
