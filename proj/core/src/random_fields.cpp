#include "gevrey/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gevrey/spectral_ops.hpp"

namespace gevrey {

void hermitian_symmetrize(SpectralField& f) {
  const auto& L = lattice(f.grid);
  for (int c = 0; c < f.components; ++c) {
    cplx* a = f.comp(c);
    for (std::size_t m = 0; m < f.modes(); ++m) {
      if (L.nyquist[m]) {
        a[m] = 0.0;
        continue;
      }
      const std::size_t k = L.conj[m];
      if (k < m) continue;
      const cplx v = 0.5 * (a[m] + std::conj(a[k]));
      a[m] = v;
      a[k] = std::conj(v);
    }
  }
}

SpectralField random_field(const Grid& g, int components,
                           const std::function<double(double)>& envelope, std::uint64_t seed) {
  const auto& L = lattice(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g, components);
  for (int c = 0; c < components; ++c)
    for (std::size_t m = 0; m < g.size(); ++m) {
      const double a = nd(rng), b = nd(rng);
      if (m == 0) continue;
      f.at(c, m) = envelope(L.xi_abs[m]) * cplx(a, b);
    }
  hermitian_symmetrize(f);
  return f;
}

SpectralField gaussian_spectrum(const Grid& g, int components, double decay, std::uint64_t seed) {
  return random_field(g, components, [decay](double r) { return std::pow(1.0 + r, -decay); }, seed);
}

SpectralField analytic_field(const Grid& g, int components, double rate, std::uint64_t seed) {
  return random_field(g, components, [rate](double r) { return std::exp(-rate * r); }, seed);
}

SpectralField shell_kernel(const DyadicSystem& sys, int j, std::uint64_t seed, double jitter) {
  const Grid& g = sys.grid;
  const auto& L = lattice(g);
  const auto& phi = sys.table(j);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, g.period);
  std::normal_distribution<double> nd;
  std::array<double, 3> x0{ud(rng), ud(rng), ud(rng)};
  SpectralField f(g, 1);
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double noise = nd(rng);
    if (phi[m] <= 0.0 || L.nyquist[m]) continue;
    double ph = 0.0;
    for (int d = 0; d < g.n_dims; ++d) ph -= L.xi(m, d) * x0[d];
    f.at(0, m) = phi[m] * (1.0 + jitter * noise) * std::polar(1.0, ph);
  }
  hermitian_symmetrize(f);
  return f;
}

SpectralField shell_random(const DyadicSystem& sys, int j, std::uint64_t seed) {
  const auto& phi = sys.table(j);
  const auto& L = lattice(sys.grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(sys.grid, 1);
  for (std::size_t m = 0; m < sys.grid.size(); ++m) {
    const double a = nd(rng), b = nd(rng);
    if (phi[m] > 0.0 && !L.nyquist[m]) f.at(0, m) = phi[m] * cplx(a, b);
  }
  hermitian_symmetrize(f);
  return f;
}

}  // namespace gevrey
