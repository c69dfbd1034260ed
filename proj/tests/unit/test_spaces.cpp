#include <numbers>

#include "common.hpp"
#include "gevrey/random_fields.hpp"
#include "gevrey/semigroup.hpp"
#include "gevrey/spaces.hpp"

using namespace gevrey;
using gevrey::test::mode_pair;
using gevrey::test::rel_err;

namespace {

SpectralField trig(const Grid& g) {
  SpectralField f = mode_pair(g, {3, 0, 0}, 0.5);
  f += mode_pair(g, {0, 5, 0}, cplx(0.0, -0.25));
  return f;
}

}  // namespace

TEST_SUITE("spaces") {

TEST_CASE("Besov norms against the numpy oracle") {
  Grid g{2, 32};
  const auto& sys = dyadic_for(g);
  auto f = trig(g);
  CHECK(rel_err(besov_norm(f, 0.5, 2, 1, sys), 9.632310127568042) < 1e-12);
  CHECK(rel_err(besov_norm(f, 1.0, 4, 2, sys), 6.277770166797663) < 1e-12);
  CHECK(rel_err(besov_norm(f, -0.5, kInf, kInf, sys), 0.4837577077178341) < 1e-12);
}

TEST_CASE("modulation norms are closed form on single-mode blocks") {
  Grid g{2, 32};
  const auto& sys = uniform_for(g);
  auto f = trig(g);
  CHECK(rel_err(modulation_norm(f, -1.0, 2, 1, sys), 2.6030346625597622) < 1e-12);
  CHECK(rel_err(exp_modulation_norm(f, 0.25, kInf, 1, sys), 2.87099994551015) < 1e-12);
}

TEST_CASE("B^0_{2,2} is equivalent to L^2") {
  Grid g{2, 64};
  auto f = gaussian_spectrum(g, 1, 1.0, 4);
  const double b = besov_norm(f, 0.0, 2, 2, dyadic_for(g));
  const double l = lp_norm(f, 2.0);
  CHECK(b <= l * (1 + 1e-12));
  CHECK(b >= l / std::sqrt(2.0));
}

TEST_CASE("norms are monotone in s and in q") {
  Grid g{2, 32};
  auto f = gaussian_spectrum(g, 1, 2.0, 8);
  const auto& sys = dyadic_for(g);
  CHECK(besov_norm(f, 0.5, 2, 2, sys) <= besov_norm(f, 1.0, 2, 2, sys));
  CHECK(besov_norm(f, 0.5, 2, 2, sys) <= besov_norm(f, 0.5, 2, 1, sys));
  CHECK(besov_norm(f, 0.5, 2, kInf, sys) <= besov_norm(f, 0.5, 2, 2, sys));
}

TEST_CASE("Chemin-Lerner trace norm matches the trapezoid oracle") {
  Grid g{2, 32};
  const auto& sys = dyadic_for(g);
  SpectralField u0 = mode_pair(g, {2, 0, 0}, 0.5);  // cos 2x, shell j = 1 only
  EvolutionTrace tr;
  for (double t : geometric_time_grid(1.0, 33)) tr.push(t, apply_semigroup(u0, t, 1.0));
  const double v = chemin_lerner_norm(tr, 2.0, 0.0, 2.0, 1.0, sys);
  CHECK(rel_err(v, 1.5962394509351574) < 1e-12);
  // sup in time is the initial norm
  CHECK(rel_err(chemin_lerner_norm(tr, kInf, 0.0, 2.0, 1.0, sys), std::sqrt(2.0) * std::numbers::pi) < 1e-12);
}

TEST_CASE("cumulative trace norm is nondecreasing and streaming agrees") {
  Grid g{2, 32};
  auto u0 = gaussian_spectrum(g, 1, 1.0, 2);
  EvolutionTrace tr;
  for (double t : geometric_time_grid(0.5, 17)) tr.push(t, apply_semigroup(u0, t, 1.0));
  NormSpec spec;
  spec.s = 0.5;
  spec.q = 1;
  spec.gamma = 3.0;
  auto cum = cumulative_trace_norm(tr, spec);
  for (std::size_t i = 1; i < cum.size(); ++i) CHECK(cum[i] >= cum[i - 1]);
  TraceNormAccumulator acc(spec, g);
  for (std::size_t i = 0; i < tr.size(); ++i) acc.push(tr.times[i], tr.states[i]);
  CHECK(rel_err(acc.value(), trace_norm(tr, spec)) < 1e-13);
  CHECK(rel_err(cum.back(), trace_norm(tr, spec)) < 1e-13);
}

TEST_CASE("norm spec JSON round trip and validation") {
  NormSpec s;
  s.family = Family::ExpModulation;
  s.s = 0.25;
  s.p = kInf;
  s.q = 1;
  auto back = NormSpec::from_json(s.to_json());
  CHECK(back.family == Family::ExpModulation);
  CHECK(back.p == kInf);
  CHECK(s.to_json()["p"] == "inf");
  NormSpec bad;
  bad.p = 0.5;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("Gevrey fit recovers the radius of a single exponential") {
  Grid g{2, 64};
  auto f = analytic_field(g, 1, 0.5, 3);
  auto fit = gevrey_membership(f, 2.0, 12);
  CHECK(fit.residual < 0.2);
  CHECK(fit.rho > 0.0);
}

}
