#include <numbers>

#include "common.hpp"
#include "gevrey/error.hpp"
#include "gevrey/random_fields.hpp"
#include "gevrey/spectral_ops.hpp"
#include "gevrey/transform.hpp"

using namespace gevrey;
using gevrey::test::mode_pair;
using gevrey::test::rel_err;

namespace {

// cos(3x) + 0.5 sin(5y)
SpectralField trig(const Grid& g) {
  SpectralField f = mode_pair(g, {3, 0, 0}, 0.5);
  f += mode_pair(g, {0, 5, 0}, cplx(0.0, -0.25));
  return f;
}

}  // namespace

TEST_SUITE("grid_transform") {

TEST_CASE("frequency ordering and flat index") {
  Grid g{2, 16};
  CHECK(g.freq(0) == 0);
  CHECK(g.freq(7) == 7);
  CHECK(g.freq(8) == -8);
  CHECK(g.freq(15) == -1);
  CHECK(g.slot(-1) == 15);
  CHECK(g.flat({1, -1, 0}) == 16 + 15);
  CHECK(g.volume() == doctest::Approx(4 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(Grid({2, 12}).validate(), Error);
  CHECK_THROWS_AS(Grid({4, 16}).validate(), Error);
}

TEST_CASE("cos(x) has coefficient 1/2 at +-e1") {
  Grid g{2, 16};
  PhysicalField u(g, 1);
  for (std::size_t m = 0; m < g.size(); ++m) u.data[m] = std::cos(grid_point(g, m)[0]);
  auto f = forward_transform(u);
  CHECK(std::abs(f.data[g.flat({1, 0, 0})] - cplx(0.5)) < 1e-15);
  CHECK(std::abs(f.data[g.flat({-1, 0, 0})] - cplx(0.5)) < 1e-15);
  CHECK(max_coefficient(f) == doctest::Approx(0.5));
}

TEST_CASE("round trip is exact to round-off") {
  for (int n : {2, 3}) {
    Grid g{n, n == 2 ? 64 : 16};
    auto f = gaussian_spectrum(g, n, 1.0, 7);
    auto back = forward_transform(inverse_transform(f));
    CHECK(coefficient_l2(back - f) < 1e-14 * coefficient_l2(f));
  }
}

TEST_CASE("non-Hermitian data refused by the real inverse") {
  Grid g{2, 16};
  SpectralField f(g, 1);
  f.data[g.flat({1, 0, 0})] = 1.0;
  CHECK_THROWS_AS(inverse_transform(f), Error);
}

TEST_CASE("L^p norms against the numpy oracle") {
  Grid g{2, 32};
  auto f = trig(g);
  CHECK(rel_err(lp_norm(f, 2.0), 4.967294132898049) < 1e-13);
  CHECK(rel_err(lp_norm(f, 4.0), 2.350694766447497) < 1e-13);
  CHECK(lp_norm(mode_pair(g, {3, 0, 0}, 0.5), kInf) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Parseval and Riemann sums agree") {
  Grid g{2, 32};
  auto f = gaussian_spectrum(g, 2, 2.0, 3);
  CHECK(rel_err(lp_norm(inverse_transform(f), 2.0), lp_norm(f, 2.0)) < 1e-12);
  CHECK(rel_err(lp_norm(f, 2.0) * lp_norm(f, 2.0), energy(f)) < 1e-12);
}

TEST_CASE("Leray projection is idempotent and divergence free") {
  Grid g{3, 16};
  auto u = gaussian_spectrum(g, 3, 1.0, 5);
  auto pu = leray_project(u);
  CHECK(divergence_defect(pu) < 1e-14);
  CHECK(coefficient_l2(leray_project(pu) - pu) < 1e-14 * coefficient_l2(pu));
}

TEST_CASE("derivative and fractional Laplacian symbols") {
  Grid g{2, 32};
  auto f = mode_pair(g, {3, 4, 0}, 0.5);
  auto d = derivative(f, 0, 1);
  CHECK(std::abs(d.data[g.flat({3, 4, 0})] - cplx(0.0, 1.5)) < 1e-14);
  auto l = fractional_laplacian(f, 1.0);
  CHECK(std::abs(l.data[g.flat({3, 4, 0})] - cplx(2.5)) < 1e-13);
}

TEST_CASE("dealiased product of modes below the cutoff is exact") {
  Grid g{2, 32};
  auto f = mode_pair(g, {2, 0, 0}, 0.5);  // cos 2x
  auto h = mode_pair(g, {0, 3, 0}, 0.5);  // cos 3y
  auto p = product(f, h);
  // cos 2x cos 3y = (cos(2x+3y) + cos(2x-3y)) / 2
  CHECK(std::abs(p.data[g.flat({2, 3, 0})] - cplx(0.25)) < 1e-15);
  CHECK(std::abs(p.data[g.flat({2, -3, 0})] - cplx(0.25)) < 1e-15);
  CHECK(coefficient_l2(p) == doctest::Approx(0.5));
}

}
