#include "common.hpp"
#include "gevrey/analyticity.hpp"
#include "gevrey/datum.hpp"
#include "gevrey/error.hpp"

using namespace gevrey;

TEST_SUITE("analyticity") {

TEST_CASE("radius fit recovers an exact exponential spectrum") {
  Grid g{2, 64};
  SpectralField f(g, 1);
  const auto& L = lattice(g);
  for (std::size_t m = 1; m < g.size(); ++m)
    if (!L.nyquist[m]) f.data[m] = std::exp(-0.3 * L.xi_l1[m]);
  auto fit = radius_fit(f);
  CHECK(fit.radius == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(fit.fit_residual < 1e-10);
  CHECK(fit.shells >= 4);
}

TEST_CASE("radius fit on a vanishing field is undefined") {
  Grid g{2, 32};
  try {
    radius_fit(SpectralField(g, 1));
    FAIL("expected UndefinedRadius");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedRadius);
  }
}

TEST_CASE("shell amplitudes of a single mode") {
  Grid g{2, 32};
  auto f = test::mode_pair(g, {2, -3, 0}, 0.5);
  auto a = shell_amplitudes(f);
  CHECK(a.at(5) == doctest::Approx(0.5));
  CHECK(a.at(4) == 0.0);
}

TEST_CASE("monitor ratio for a single heat mode") {
  // xi = (1, 2): e^{sqrt t |xi|_1 - t |xi|^2} peaks at t = 0.09 with 1.568...
  Grid g{2, 32};
  auto u0 = test::mode_pair(g, {1, 2, 0}, 0.5);
  EvolutionTrace tr;
  for (double t : {0.0, 0.09, 0.25})
    tr.push(t, apply_semigroup(u0, t, 1.0));
  NormSpec n;
  n.family = Family::Besov;
  n.s = 0.0;
  n.p = 2;
  n.q = 1;
  auto mon = gevrey_norm_monitor(tr, 1.0, 1.0, n);
  CHECK(mon.values[1] / mon.values[0] == doctest::Approx(1.568312185490169).epsilon(1e-12));
  CHECK(mon.values[2] / mon.values[0] == doctest::Approx(1.2840254166877414).epsilon(1e-12));
  CHECK_FALSE(mon.alarm_index.has_value());
}

TEST_CASE("radius csv header and rows") {
  RadiusFit f;
  f.t = 0.5;
  f.radius = 0.25;
  auto csv = radius_csv({f});
  CHECK(csv.find("t,") == 0);
  CHECK(csv.find("0.5,0.25") != std::string::npos);
}

}
