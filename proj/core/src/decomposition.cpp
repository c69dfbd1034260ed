#include "gevrey/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gevrey/error.hpp"
#include "gevrey/spectral_ops.hpp"
#include "gevrey/transform.hpp"

namespace gevrey {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double smoothstep(double x, int order) {
  double s = 0.0;
  for (int i = 0; i <= order; ++i)
    s += binom(order + i, i) * binom(2 * order + 1, order - i) * std::pow(-x, i);
  return std::pow(x, order + 1) * s;
}

}  // namespace

double ramp(double x, int smoothness) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (smoothness >= 1) return smoothstep(x, smoothness);
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double cutoff_profile(double r, int smoothness) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return ramp(2.0 - r, smoothness);
}

double uniform_profile(double t) {
  const double a = std::abs(t);
  if (a <= 0.25) return 1.0;
  if (a >= 0.75) return 0.0;
  return ramp((0.75 - a) * 2.0, 0);
}

const std::vector<double>& DyadicSystem::table(int j) const {
  if (j < j_min || j > j_max)
    fail(ErrorKind::IndexError, "dyadic shell " + std::to_string(j) + " outside [" +
                                    std::to_string(j_min) + ", " + std::to_string(j_max) + "]");
  return phi[static_cast<std::size_t>(j - j_min)];
}

std::vector<double> DyadicSystem::low_table(int k) const {
  const auto& L = lattice(grid);
  std::vector<double> t(grid.size());
  const double s = std::ldexp(1.0, -k);
  for (std::size_t m = 0; m < t.size(); ++m) t[m] = psi(s * L.xi_abs[m]);
  return t;
}

DyadicSystem build_dyadic(const Grid& g, int profile_smoothness) {
  if (profile_smoothness < 0)
    fail(ErrorKind::InvalidParameter, "profile_smoothness must be >= 0");
  const auto& L = lattice(g);
  DyadicSystem sys;
  sys.grid = g;
  sys.smoothness = profile_smoothness;
  sys.j_min = static_cast<int>(std::floor(std::log2(L.min_nonzero_xi()) + 1e-12));
  sys.j_max = static_cast<int>(std::ceil(std::log2(g.kappa() * g.N / 2.0) - 1e-12)) + 1;
  std::vector<double> prev = sys.low_table(sys.j_min - 1);
  for (int j = sys.j_min; j <= sys.j_max; ++j) {
    std::vector<double> cur = sys.low_table(j);
    std::vector<double> phi(cur.size());
    for (std::size_t m = 0; m < cur.size(); ++m) phi[m] = cur[m] - prev[m];
    sys.phi.push_back(std::move(phi));
    prev = std::move(cur);
  }
  return sys;
}

SpectralField dyadic_block(const SpectralField& f, int j, const DyadicSystem& sys) {
  return apply_multiplier(f, sys.table(j));
}

SpectralField low_freq_project(const SpectralField& f, int k, const DyadicSystem& sys) {
  if (k > sys.j_max) fail(ErrorKind::IndexError, "low_freq_project: k above j_max");
  return apply_multiplier(f, sys.low_table(k));
}

SpectralField mean_part(const SpectralField& f) {
  SpectralField out(f.grid, f.components);
  for (int c = 0; c < f.components; ++c) out.at(c, 0) = f.at(c, 0);
  return out;
}

std::vector<double> dyadic_block_norms(const SpectralField& f, const DyadicSystem& sys, double p) {
  check_exponent(p, "p");
  std::vector<double> out;
  out.reserve(sys.shells());
  for (int j = sys.j_min; j <= sys.j_max; ++j) {
    const auto& t = sys.table(j);
    if (p == 2.0) {
      const auto& L = lattice(f.grid);
      double s = 0.0;
      for (int c = 0; c < f.components; ++c)
        for (std::size_t m = 0; m < f.modes(); ++m)
          if (t[m] != 0.0 && !L.nyquist[m]) s += std::norm(t[m] * f.at(c, m));
      out.push_back(std::sqrt(s * f.grid.volume()));
    } else {
      out.push_back(lp_norm(dyadic_block(f, j, sys), p));
    }
  }
  return out;
}

Paraproduct paraproduct_split(const SpectralField& f, const SpectralField& g,
                              const DyadicSystem& sys) {
  if (f.components != 1 || g.components != 1)
    fail(ErrorKind::InvalidParameter, "paraproduct_split: scalar fields expected");
  Paraproduct out{SpectralField(f.grid, 1), SpectralField(f.grid, 1)};
  std::vector<double> low_prev = sys.low_table(sys.j_min - 1);
  for (int j = sys.j_min; j <= sys.j_max; ++j) {
    std::vector<double> low_cur = sys.low_table(j);
    const auto& phi = sys.table(j);
    out.low_high += product(apply_multiplier(f, low_prev), apply_multiplier(g, phi));
    out.high_low += product(apply_multiplier(g, low_cur), apply_multiplier(f, phi));
    low_prev = std::move(low_cur);
  }
  return out;
}

double UniformSystem::sigma(const std::array<double, 3>& xi, const std::array<int, 3>& k) const {
  double s = 1.0;
  for (int d = 0; d < grid.n_dims; ++d) s *= uniform_profile(xi[d] - k[d]);
  return s;
}

bool UniformSystem::active(const std::array<int, 3>& k) const {
  for (int d = 0; d < grid.n_dims; ++d)
    if (std::abs(k[d]) > k_max) return false;
  return true;
}

const UniformBlock* UniformSystem::find(const std::array<int, 3>& k) const {
  auto it = index.find(k);
  return it == index.end() ? nullptr : &blocks[it->second];
}

UniformSystem build_uniform(const Grid& g) {
  const auto& L = lattice(g);
  UniformSystem sys;
  sys.grid = g;
  sys.k_max = static_cast<int>(std::ceil(g.kappa() * g.N / 2.0 + 0.75));
  for (std::size_t m = 0; m < g.size(); ++m) {
    const auto xi = L.xi_vec(m);
    // Candidate block centres per axis: integers within 3/4 of xi_d.
    std::array<std::vector<int>, 3> cand;
    for (int d = 0; d < 3; ++d) {
      if (d >= g.n_dims) {
        cand[d] = {0};
        continue;
      }
      for (int c = static_cast<int>(std::floor(xi[d] - 0.75));
           c <= static_cast<int>(std::ceil(xi[d] + 0.75)); ++c)
        if (std::abs(xi[d] - c) < 0.75) cand[d].push_back(c);
    }
    for (int a : cand[0])
      for (int b : cand[1])
        for (int c : cand[2]) {
          std::array<int, 3> k{a, b, c};
          const double w = sys.sigma(xi, k);
          if (w == 0.0) continue;
          auto it = sys.index.find(k);
          if (it == sys.index.end()) {
            it = sys.index.emplace(k, sys.blocks.size()).first;
            sys.blocks.push_back(UniformBlock{k, {}, {}});
          }
          sys.blocks[it->second].modes.push_back(m);
          sys.blocks[it->second].weight.push_back(w);
        }
  }
  return sys;
}

SpectralField uniform_block(const SpectralField& f, const std::array<int, 3>& k,
                            const UniformSystem& sys) {
  if (!sys.active(k)) fail(ErrorKind::IndexError, "uniform_block: index outside active set");
  SpectralField out(f.grid, f.components);
  if (const UniformBlock* b = sys.find(k)) {
    for (std::size_t i = 0; i < b->modes.size(); ++i)
      for (int c = 0; c < f.components; ++c)
        out.at(c, b->modes[i]) = b->weight[i] * f.at(c, b->modes[i]);
  }
  return out;
}

double uniform_block_norm(const SpectralField& f, const UniformBlock& b, double p) {
  check_exponent(p, "p");
  if (b.modes.size() == 1 || p == 2.0) {
    // Single exponential (constant modulus) or Parseval.
    double s = 0.0;
    for (std::size_t i = 0; i < b.modes.size(); ++i)
      for (int c = 0; c < f.components; ++c) s += std::norm(b.weight[i] * f.at(c, b.modes[i]));
    if (p == 2.0) return std::sqrt(s * f.grid.volume());
    const double amp = std::sqrt(s);
    return p == kInf ? amp : amp * std::pow(f.grid.volume(), 1.0 / p);
  }
  SpectralField blk(f.grid, f.components);
  for (std::size_t i = 0; i < b.modes.size(); ++i)
    for (int c = 0; c < f.components; ++c)
      blk.at(c, b.modes[i]) = b.weight[i] * f.at(c, b.modes[i]);
  std::vector<std::vector<cplx>> samples;
  for (int c = 0; c < f.components; ++c) samples.push_back(inverse_complex(blk, c));
  return lp_norm_complex(f.grid, samples, p);
}

std::vector<double> uniform_block_norms(const SpectralField& f, const UniformSystem& sys, double p) {
  std::vector<double> out;
  out.reserve(sys.blocks.size());
  for (const auto& b : sys.blocks) out.push_back(uniform_block_norm(f, b, p));
  return out;
}

}  // namespace gevrey
