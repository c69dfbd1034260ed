#include "common.hpp"
#include "gevrey/decomposition.hpp"
#include "gevrey/random_fields.hpp"
#include "gevrey/spectral_ops.hpp"

using namespace gevrey;

TEST_SUITE("decomposition") {

TEST_CASE("ramp values match the oracle") {
  CHECK(ramp(0.25, 0) == doctest::Approx(0.06496916912866406).epsilon(1e-14));
  CHECK(ramp(0.5, 0) == doctest::Approx(0.5));
  CHECK(ramp(0.75, 0) == doctest::Approx(0.935030830871336).epsilon(1e-14));
  for (double x = 0.0; x <= 1.0; x += 0.05) CHECK(ramp(x, 0) + ramp(1 - x, 0) == doctest::Approx(1.0));
}

TEST_CASE("cut-off profile support") {
  CHECK(cutoff_profile(1.0, 0) == 1.0);
  CHECK(cutoff_profile(2.0, 0) == 0.0);
  CHECK(cutoff_profile(1.5, 0) == doctest::Approx(0.5));
  CHECK(uniform_profile(0.2) == 1.0);
  CHECK(uniform_profile(0.8) == 0.0);
  CHECK(uniform_profile(0.5) == doctest::Approx(0.5));
}

TEST_CASE("dyadic shells partition the lattice") {
  Grid g{2, 32};
  auto sys = build_dyadic(g);
  CHECK(sys.j_min == 0);
  CHECK(sys.j_max == 5);
  const auto& L = lattice(g);
  for (std::size_t m = 1; m < g.size(); ++m) {
    double s = 0.0;
    for (int j = sys.j_min; j <= sys.j_max; ++j) s += sys.table(j)[m];
    CHECK(s == doctest::Approx(1.0));
  }
  // |xi| = 3 sits on the overlap of shells 1 and 2 with weight 1/2 each.
  const auto m = g.flat({3, 0, 0});
  CHECK(L.xi_abs[m] == 3.0);
  CHECK(sys.table(1)[m] == doctest::Approx(0.5));
  CHECK(sys.table(2)[m] == doctest::Approx(0.5));
}

TEST_CASE("dyadic and uniform reconstruction") {
  for (int n : {2, 3}) {
    Grid g{n, n == 2 ? 64 : 16};
    auto f = gaussian_spectrum(g, 1, 1.0, 9);
    auto dsys = build_dyadic(g);
    SpectralField acc = mean_part(f);
    for (int j = dsys.j_min; j <= dsys.j_max; ++j) acc += dyadic_block(f, j, dsys);
    CHECK(max_coefficient(acc - f) < 1e-14);
    auto usys = build_uniform(g);
    SpectralField uacc(g, 1);
    for (const auto& b : usys.blocks) uacc += uniform_block(f, b.k, usys);
    CHECK(max_coefficient(uacc - f) < 1e-14);
  }
}

TEST_CASE("paraproducts sum to the dealiased product") {
  Grid g{2, 64};
  auto sys = build_dyadic(g);
  auto f = dealias(gaussian_spectrum(g, 1, 2.0, 1));
  auto h = dealias(gaussian_spectrum(g, 1, 2.0, 2));
  auto pp = paraproduct_split(f, h, sys);
  // Zero-mean inputs: every pair (j, j') lands in exactly one of the two sums.
  auto full = product(f, h);
  CHECK(coefficient_l2(pp.low_high + pp.high_low - full) < 1e-14 * coefficient_l2(full));
  CHECK(coefficient_l2(pp.low_high) > 0.1 * coefficient_l2(full));
}

TEST_CASE("low frequency projection includes the mean") {
  Grid g{2, 32};
  auto sys = build_dyadic(g);
  SpectralField f(g, 1);
  f.data[0] = 2.0;
  auto lo = low_freq_project(f, 0, sys);
  CHECK(lo.data[0] == cplx(2.0));
}

}
