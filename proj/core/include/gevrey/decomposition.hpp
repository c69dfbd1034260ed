#pragma once

#include <array>
#include <map>
#include <vector>

#include "gevrey/field.hpp"

namespace gevrey {

// Ramp h on [0,1] with h(0)=0, h(1)=1, h(x)+h(1-x)=1. smoothness 0 selects the
// exp(-1/x) mollifier bridge; k >= 1 the order-k polynomial smoothstep.
double ramp(double x, int smoothness);
// Radial cut-off: 1 on r <= 1, 0 on r >= 2.
double cutoff_profile(double r, int smoothness);
// 1D profile for the uniform partition: 1 on |t| <= 1/4, 0 on |t| >= 3/4.
double uniform_profile(double t);

struct DyadicSystem {
  Grid grid;
  int smoothness = 0;
  int j_min = 0;
  int j_max = 0;
  std::vector<std::vector<double>> phi;  // phi[j - j_min]

  int shells() const { return j_max - j_min + 1; }
  double psi(double r) const { return cutoff_profile(r, smoothness); }
  const std::vector<double>& table(int j) const;
  // psi(2^{-k} |xi|); includes the mean.
  std::vector<double> low_table(int k) const;
};

DyadicSystem build_dyadic(const Grid& g, int profile_smoothness = 0);
SpectralField dyadic_block(const SpectralField& f, int j, const DyadicSystem& sys);
SpectralField low_freq_project(const SpectralField& f, int k, const DyadicSystem& sys);
SpectralField mean_part(const SpectralField& f);
// ||Delta_j f||_p for j = j_min..j_max.
std::vector<double> dyadic_block_norms(const SpectralField& f, const DyadicSystem& sys, double p);

struct Paraproduct {
  SpectralField low_high;  // sum_j S_{j-1} f . Delta_j g
  SpectralField high_low;  // sum_j S_j g . Delta_j f
};
Paraproduct paraproduct_split(const SpectralField& f, const SpectralField& g,
                              const DyadicSystem& sys);

struct UniformBlock {
  std::array<int, 3> k{0, 0, 0};
  std::vector<std::size_t> modes;
  std::vector<double> weight;
};

struct UniformSystem {
  Grid grid;
  int k_max = 0;
  std::vector<UniformBlock> blocks;
  std::map<std::array<int, 3>, std::size_t> index;

  // sigma_k(xi) for an arbitrary point.
  double sigma(const std::array<double, 3>& xi, const std::array<int, 3>& k) const;
  bool active(const std::array<int, 3>& k) const;
  const UniformBlock* find(const std::array<int, 3>& k) const;
};

UniformSystem build_uniform(const Grid& g);
// Complex-valued in general: sigma_k is not symmetric under xi -> -xi.
SpectralField uniform_block(const SpectralField& f, const std::array<int, 3>& k,
                            const UniformSystem& sys);
double uniform_block_norm(const SpectralField& f, const UniformBlock& b, double p);
std::vector<double> uniform_block_norms(const SpectralField& f, const UniformSystem& sys, double p);

}  // namespace gevrey
