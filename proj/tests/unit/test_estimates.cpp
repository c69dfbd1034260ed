#include "common.hpp"
#include "gevrey/error.hpp"
#include "gevrey/estimates.hpp"
#include "gevrey/random_fields.hpp"
#include "gevrey/spectral_ops.hpp"

using namespace gevrey;

TEST_SUITE("estimates") {

TEST_CASE("registry lists every inequality once") {
  const auto& ids = inequality_ids();
  CHECK(ids.size() == 11);
  CHECK(ids.front() == "bernstein");
  CHECK(std::find(ids.begin(), ids.end(), "paraproduct_infty") != ids.end());
  CHECK_THROWS_AS(verify("no_such_id", EnsembleSpec{}), Error);
}

TEST_CASE("ensemble validation") {
  EnsembleSpec s;
  s.n_samples = 5;
  CHECK_THROWS_AS(s.validate(), Error);
  s = EnsembleSpec{};
  s.resolutions = {};
  CHECK_THROWS_AS(s.validate(), Error);
  s = EnsembleSpec{};
  auto back = EnsembleSpec::from_json(nlohmann::json::parse(s.to_json().dump()));
  CHECK(back.to_json() == s.to_json());
}

TEST_CASE("single mode saturates the L2 Bernstein bound") {
  Grid g{2, 32};
  auto f = test::mode_pair(g, {4, 0, 0}, 0.5);
  auto d = fractional_laplacian(f, 1.0);
  CHECK(lp_norm(d, 2.0) == doctest::Approx(4.0 * lp_norm(f, 2.0)));
}

TEST_CASE("small verify runs are deterministic and pass") {
  EnsembleSpec s;
  s.n_samples = 10;
  s.resolutions = {16, 32};
  s.seed = 4;
  auto a = verify("uniform_decay", s);
  auto b = verify("uniform_decay", s);
  CHECK(a.pass);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(std::isfinite(a.C_emp));
  CHECK(a.resolution_drift <= s.drift_bound);
}

TEST_CASE("calibration ids per family") {
  CHECK(calibration_ids(Family::Besov).size() == 3);
  CHECK(calibration_ids(Family::Modulation).size() == 2);
}

}
