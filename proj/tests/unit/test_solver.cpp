#include "common.hpp"
#include "gevrey/datum.hpp"
#include "gevrey/error.hpp"
#include "gevrey/solver.hpp"

using namespace gevrey;

namespace {

double rel_l2(const SpectralField& a, const SpectralField& b) {
  return std::sqrt(energy(a - b) / energy(b));
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("Taylor-Green energy matches 2 pi^2") {
  Grid g{2, 32};
  CHECK(energy(taylor_green(g, 1.0)) == doctest::Approx(19.739208802178716).epsilon(1e-14));
}

TEST_CASE("Taylor-Green decays exactly under the stepper") {
  Grid g{2, 32};
  auto tg = taylor_green(g, 1.0);
  auto cfg = scheme_config(Scheme::Besov, 2);
  cfg.T = 0.25;
  cfg.dt = 1e-3;
  cfg.n_records = 5;
  auto r = step_solve(tg, cfg);
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    CHECK(rel_l2(r.trace.states[i], std::exp(-2 * r.trace.times[i]) * tg) < 1e-10);
  CHECK(r.energy_balance_defect < 1e-10);
}

TEST_CASE("zero datum is a Picard fixed point") {
  Grid g{2, 16};
  auto cfg = scheme_config(Scheme::Besov, 2);
  cfg.T = 0.5;
  cfg.n_picard = 3;
  auto r = picard_solve(SpectralField(g, 2), cfg);
  CHECK(r.converged);
  CHECK(r.final_norm == 0.0);
}

TEST_CASE("configuration validation") {
  SolverConfig cfg;
  cfg.dt = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SolverConfig{};
  cfg.n_picard = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SolverConfig{};
  cfg.alpha = 1.2;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("config JSON round trip") {
  auto cfg = scheme_config(Scheme::Modulation, 2);
  auto j = cfg.to_json();
  auto back = SolverConfig::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.to_json() == j);
}

TEST_CASE("critical space exponent") {
  auto s = critical_space(2, 1.0, 2.0);
  CHECK(s.s == doctest::Approx(0.0));
  CHECK(critical_space(3, 0.5, 2.0).s == doctest::Approx(1.5));
}

TEST_CASE("picard time grid") {
  auto t = picard_time_grid(1.0, 65);
  CHECK(t.size() == 65);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
}

TEST_CASE("large data blow up is reported as instability") {
  Grid g{2, 16};
  DatumSpec d;
  d.kind = "random_div_free";
  d.amplitude = 1e200;
  d.seed = 1;
  auto cfg = scheme_config(Scheme::Besov, 2);
  cfg.T = 0.1;
  cfg.dt = 1e-2;
  try {
    step_solve(init_data(g, d), cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::Unstable || e.kind() == ErrorKind::Overflow));
  }
}

}
