#include "gevrey/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gevrey/error.hpp"
#include "gevrey/spectral_ops.hpp"

namespace gevrey {

void check_alpha(double alpha) {
  if (!(alpha >= 0.5 && alpha <= 1.0))
    fail(ErrorKind::InvalidParameter, "alpha must lie in [1/2, 1]");
}

std::vector<double> dissipation_symbol(const Grid& g, double alpha) {
  const auto& L = lattice(g);
  std::vector<double> lam(g.size());
  for (std::size_t m = 0; m < lam.size(); ++m)
    lam[m] = alpha == 1.0 ? L.xi2[m] : std::pow(L.xi2[m], alpha);
  return lam;
}

SpectralField apply_semigroup(const SpectralField& u0, double t, double alpha) {
  check_alpha(alpha);
  if (!(t >= 0.0) || !std::isfinite(t))
    fail(ErrorKind::InvalidParameter, "apply_semigroup: t must be finite and >= 0");
  if (t == 0.0) return u0;
  auto lam = dissipation_symbol(u0.grid, alpha);
  for (auto& v : lam) v = std::exp(-t * v);
  return apply_multiplier(u0, lam);
}

double phi1(double z) {
  if (std::abs(z) < 1e-2) {
    // 1 - z/2 + z^2/6 - z^3/24 + z^4/120 - z^5/720
    return 1.0 + z * (-1.0 / 2 + z * (1.0 / 6 + z * (-1.0 / 24 + z * (1.0 / 120 - z / 720))));
  }
  return -std::expm1(-z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.1) {
    // sum_k (-z)^k / (k + 2)!
    double term = 0.5, s = 0.0;
    for (int k = 0; k < 14; ++k) {
      s += term;
      term *= -z / (k + 3);
    }
    return s;
  }
  return (std::expm1(-z) + z) / (z * z);
}

std::array<double, 2> etd_weights(double z, double h) {
  const double p1 = phi1(z), p2 = phi2(z);
  return {h * (p1 - p2), h * p2};
}

std::vector<SpectralField> duhamel_trace(const EvolutionTrace& forcing, double alpha) {
  check_alpha(alpha);
  forcing.validate();
  if (forcing.empty()) fail(ErrorKind::CoverageError, "duhamel: empty forcing trace");
  const Grid& g = forcing.grid();
  const auto lam = dissipation_symbol(g, alpha);
  const std::size_t n = g.size();
  const int comps = forcing.states.front().components;
  std::vector<SpectralField> out;
  out.reserve(forcing.size());
  SpectralField acc(g, comps);
  out.push_back(acc);
  std::vector<double> decay(n), wa(n), wb(n);
  for (std::size_t i = 1; i < forcing.size(); ++i) {
    const double h = forcing.times[i] - forcing.times[i - 1];
    for (std::size_t m = 0; m < n; ++m) {
      const double z = lam[m] * h;
      decay[m] = std::exp(-z);
      const auto w = etd_weights(z, h);
      wa[m] = w[0];
      wb[m] = w[1];
    }
    const auto& fa = forcing.states[i - 1];
    const auto& fb = forcing.states[i];
    for (int c = 0; c < comps; ++c)
      for (std::size_t m = 0; m < n; ++m)
        acc.at(c, m) = decay[m] * acc.at(c, m) + wa[m] * fa.at(c, m) + wb[m] * fb.at(c, m);
    acc.divergence_free = fa.divergence_free && fb.divergence_free;
    out.push_back(acc);
  }
  return out;
}

SpectralField duhamel(const EvolutionTrace& forcing, double t, double alpha) {
  check_alpha(alpha);
  forcing.validate();
  if (forcing.empty() || forcing.times.front() > 0.0 || forcing.times.back() < t || t < 0.0)
    fail(ErrorKind::CoverageError, "duhamel: forcing trace does not cover [0, t]");
  // Truncate (and interpolate) the trace at t, then run the recursion.
  EvolutionTrace cut;
  for (std::size_t i = 0; i < forcing.size() && forcing.times[i] <= t; ++i)
    cut.push(forcing.times[i], forcing.states[i]);
  if (cut.times.back() < t) {
    const std::size_t i = cut.size();
    const double a = forcing.times[i - 1], b = forcing.times[i];
    const double w = (t - a) / (b - a);
    cut.push(t, (1.0 - w) * forcing.states[i - 1] + w * forcing.states[i]);
  }
  return duhamel_trace(cut, alpha).back();
}

std::vector<double> geometric_time_grid(double T, int M, double first_fraction) {
  if (!(T > 0.0) || M < 2) fail(ErrorKind::InvalidParameter, "geometric_time_grid: need T > 0, M >= 2");
  std::vector<double> t{0.0};
  if (M == 2) {
    t.push_back(T);
    return t;
  }
  const double t1 = T * first_fraction;
  const double r = std::pow(T / t1, 1.0 / (M - 2));
  for (int i = 0; i < M - 1; ++i) t.push_back(i == M - 2 ? T : t1 * std::pow(r, i));
  return t;
}

namespace {

SpectralField random_supported(const Grid& g, const std::vector<double>& support, std::uint64_t seed) {
  const auto& L = lattice(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g, 1);
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double a = nd(rng), b = nd(rng);
    if (support[m] > 0.0 && !L.nyquist[m]) f.at(0, m) = cplx(a, b);
  }
  for (std::size_t m = 0; m < g.size(); ++m) {
    const std::size_t c = L.conj[m];
    if (c < m) continue;
    const cplx v = 0.5 * (f.at(0, m) + std::conj(f.at(0, c)));
    f.at(0, m) = v;
    f.at(0, c) = std::conj(v);
  }
  return f;
}

}  // namespace

BlockDecay block_decay_dyadic(int j, double t, double alpha, const DyadicSystem& sys,
                              std::uint64_t seed) {
  check_alpha(alpha);
  const auto& phi = sys.table(j);
  SpectralField f = random_supported(sys.grid, phi, seed);
  SpectralField b0 = dyadic_block(f, j, sys);
  SpectralField bt = dyadic_block(apply_semigroup(f, t, alpha), j, sys);
  const double r_in = j == sys.j_min ? 0.0 : std::ldexp(1.0, j - 1);
  BlockDecay d;
  const double base = lp_norm(b0, kInf);
  d.measured = base > 0.0 ? lp_norm(bt, kInf) / base : 0.0;
  d.bound_rate = std::exp(-t * std::pow(r_in, 2.0 * alpha));
  return d;
}

BlockDecay block_decay_uniform(const std::array<int, 3>& k, double t, double alpha,
                               const UniformSystem& sys, std::uint64_t seed) {
  check_alpha(alpha);
  const UniformBlock* blk = sys.find(k);
  if (!blk) fail(ErrorKind::IndexError, "block_decay_uniform: empty or inactive block");
  std::vector<double> support(sys.grid.size(), 0.0);
  for (std::size_t m : blk->modes) support[m] = 1.0;
  // Complex data: blocks away from the origin are not Hermitian-closed.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(sys.grid, 1);
  for (std::size_t m : blk->modes) f.at(0, m) = cplx(nd(rng), nd(rng));
  SpectralField b0 = uniform_block(f, k, sys);
  SpectralField bt = uniform_block(apply_semigroup(f, t, alpha), k, sys);
  double r2 = 0.0;
  for (int d = 0; d < sys.grid.n_dims; ++d) {
    const double e = std::max(std::abs(k[d]) - 0.75, 0.0);
    r2 += e * e;
  }
  BlockDecay d;
  const double base = uniform_block_norm(b0, *blk, kInf);
  d.measured = base > 0.0 ? uniform_block_norm(bt, *blk, kInf) / base : 0.0;
  d.bound_rate = std::exp(-t * std::pow(r2, alpha));
  return d;
}

EvolutionTrace weighted_semigroup_trace(const SpectralField& u0, const std::vector<double>& t_grid,
                                        double alpha, const WeightSpec& weight) {
  check_alpha(alpha);
  weight.validate();
  const auto& L = lattice(u0.grid);
  const auto lam = dissipation_symbol(u0.grid, alpha);
  EvolutionTrace tr;
  for (double t : t_grid) {
    if (t < 0.0) fail(ErrorKind::InvalidParameter, "weighted_semigroup: negative time");
    const double th = weight.theta(t);
    SpectralField u(u0.grid, u0.components);
    u.divergence_free = u0.divergence_free;
    for (std::size_t m = 0; m < u0.modes(); ++m) {
      if (L.nyquist[m]) continue;
      const double e = th * L.xi_l1[m] - t * lam[m];
      bool nonzero = false;
      for (int c = 0; c < u0.components; ++c) nonzero = nonzero || u0.at(c, m) != cplx(0.0);
      if (!nonzero) continue;
      if (e > kWeightLogGuard)
        fail(ErrorKind::UnstableWeight, "weighted semigroup exponent exceeds guard e^50");
      const double w = std::exp(e);
      for (int c = 0; c < u0.components; ++c) u.at(c, m) = w * u0.at(c, m);
    }
    tr.push(t, std::move(u));
  }
  return tr;
}

double weighted_semigroup_norm(const SpectralField& u0, const std::vector<double>& t_grid,
                               double alpha, const WeightSpec& weight, const NormSpec& norm) {
  if (weight.is_lambda() && weight.rate > 0.0) {
    const double pw = weight.kind == WeightKind::ExpSqrtT     ? 0.5
                      : weight.kind == WeightKind::ExpLinearT ? 1.0
                                                              : weight.power;
    if (std::abs(pw - 1.0 / (2.0 * alpha)) > 1e-12)
      fail(ErrorKind::InvalidParameter,
           "weighted_semigroup_norm: weight power must equal 1/(2 alpha)");
  }
  EvolutionTrace tr = weighted_semigroup_trace(u0, t_grid, alpha, weight);
  NormSpec plain = norm;
  if (plain.weight.is_lambda()) plain.weight = WeightSpec::none();
  return trace_norm(tr, plain);
}

}  // namespace gevrey
