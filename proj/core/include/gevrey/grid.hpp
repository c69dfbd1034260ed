#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <vector>

namespace gevrey {

// Periodic box [0, period)^n sampled with N points per axis.
struct Grid {
  int n_dims = 2;
  int N = 64;
  double period = 2.0 * std::numbers::pi;

  void validate() const;
  std::size_t size() const;
  double kappa() const { return 2.0 * std::numbers::pi / period; }
  double volume() const;
  double cell_volume() const;
  // FFT ordering: i < N/2 -> i, otherwise i - N (so N/2 maps to -N/2).
  int freq(int i) const { return i < N / 2 ? i : i - N; }
  int slot(int k) const { return k >= 0 ? k : k + N; }
  std::size_t flat(const std::array<int, 3>& k) const;
  // Largest |k_i| kept by the 2/3 rule.
  int dealias_cutoff() const { return N / 3; }

  bool operator==(const Grid& o) const {
    return n_dims == o.n_dims && N == o.N && period == o.period;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

// Per-grid wavenumber tables, built once and shared.
struct Lattice {
  Grid grid;
  std::vector<std::array<int, 3>> k;
  std::vector<double> xi2;
  std::vector<double> xi_abs;
  std::vector<double> xi_l1;
  std::vector<std::size_t> conj;
  std::vector<unsigned char> nyquist;
  std::vector<unsigned char> kept;

  double xi(std::size_t m, int axis) const { return grid.kappa() * k[m][axis]; }
  std::array<double, 3> xi_vec(std::size_t m) const;
  double max_xi_abs() const;
  double max_xi_l1() const;
  double min_nonzero_xi() const { return grid.kappa(); }
};

const Lattice& lattice(const Grid& g);

}  // namespace gevrey
