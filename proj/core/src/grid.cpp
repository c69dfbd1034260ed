#include "gevrey/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "gevrey/error.hpp"

namespace gevrey {

void Grid::validate() const {
  if (n_dims != 2 && n_dims != 3)
    fail(ErrorKind::Validation, "grid.n_dims must be 2 or 3, got " + std::to_string(n_dims));
  if (N < 8 || (N & (N - 1)) != 0)
    fail(ErrorKind::Validation,
         "grid.resolution must be a power of two >= 8, got " + std::to_string(N));
  if (!(period > 0.0) || !std::isfinite(period))
    fail(ErrorKind::Validation, "grid.period must be positive");
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < n_dims; ++d) s *= static_cast<std::size_t>(N);
  return s;
}

double Grid::volume() const { return std::pow(period, n_dims); }

double Grid::cell_volume() const { return volume() / static_cast<double>(size()); }

std::size_t Grid::flat(const std::array<int, 3>& k) const {
  std::size_t m = 0;
  for (int d = 0; d < n_dims; ++d) m = m * N + static_cast<std::size_t>(slot(k[d]));
  return m;
}

std::array<double, 3> Lattice::xi_vec(std::size_t m) const {
  const double kap = grid.kappa();
  return {kap * k[m][0], kap * k[m][1], kap * k[m][2]};
}

double Lattice::max_xi_abs() const { return *std::max_element(xi_abs.begin(), xi_abs.end()); }

double Lattice::max_xi_l1() const { return *std::max_element(xi_l1.begin(), xi_l1.end()); }

namespace {

std::unique_ptr<Lattice> build(const Grid& g) {
  auto L = std::make_unique<Lattice>();
  L->grid = g;
  const std::size_t n = g.size();
  L->k.resize(n);
  L->xi2.resize(n);
  L->xi_abs.resize(n);
  L->xi_l1.resize(n);
  L->conj.resize(n);
  L->nyquist.resize(n);
  L->kept.resize(n);
  const double kap = g.kappa();
  const int cut = g.dealias_cutoff();
  for (std::size_t m = 0; m < n; ++m) {
    std::array<int, 3> k{0, 0, 0};
    std::size_t r = m;
    for (int d = g.n_dims - 1; d >= 0; --d) {
      k[d] = g.freq(static_cast<int>(r % g.N));
      r /= g.N;
    }
    double s2 = 0.0, s1 = 0.0;
    bool nyq = false, keep = true;
    std::array<int, 3> mk{0, 0, 0};
    for (int d = 0; d < g.n_dims; ++d) {
      s2 += kap * kap * k[d] * k[d];
      s1 += kap * std::abs(k[d]);
      if (k[d] == -g.N / 2) nyq = true;
      if (std::abs(k[d]) > cut) keep = false;
      mk[d] = -k[d];
    }
    L->k[m] = k;
    L->xi2[m] = s2;
    L->xi_abs[m] = std::sqrt(s2);
    L->xi_l1[m] = s1;
    L->conj[m] = g.flat(mk);
    L->nyquist[m] = nyq;
    L->kept[m] = keep;
  }
  return L;
}

}  // namespace

const Lattice& lattice(const Grid& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<Lattice>> cache;
  g.validate();
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n_dims, g.N, g.period);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build(g)).first;
  return *it->second;
}

}  // namespace gevrey
