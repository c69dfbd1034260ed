#include "gevrey/datum.hpp"

#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/random_fields.hpp"
#include "gevrey/spectral_ops.hpp"
#include "gevrey/transform.hpp"

namespace gevrey {

void DatumSpec::validate(const Grid& g) const {
  g.validate();
  if (!std::isfinite(amplitude) || amplitude < 0.0)
    fail(ErrorKind::Validation, "datum.amplitude must be finite and >= 0");
  if (kind == "random_div_free") {
    if (!std::isfinite(decay)) fail(ErrorKind::Validation, "datum.decay must be finite");
  } else if (kind == "analytic") {
    if (!(rate > 0.0) || !std::isfinite(rate))
      fail(ErrorKind::Validation, "datum.rate must be positive");
  } else if (kind == "single_mode") {
    bool nonzero = false;
    for (int d = 0; d < 3; ++d) {
      if (d >= g.n_dims) {
        if (mode[d] != 0) fail(ErrorKind::Validation, "datum.mode has more entries than grid.n_dims");
        continue;
      }
      if (std::abs(mode[d]) >= g.N / 2)
        fail(ErrorKind::Validation, "datum.mode: |xi_i| must be below N/2 = " + std::to_string(g.N / 2));
      nonzero = nonzero || mode[d] != 0;
    }
    if (!nonzero) fail(ErrorKind::Validation, "datum.mode must be nonzero");
  } else if (kind != "taylor_green") {
    fail(ErrorKind::Validation, "datum.kind: unknown value '" + kind + "'");
  }
  if (measure) measure->validate();
}

nlohmann::ordered_json DatumSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["amplitude"] = amplitude;
  if (kind == "random_div_free") {
    j["decay"] = decay;
    j["seed"] = seed;
  }
  if (kind == "analytic") {
    j["rate"] = rate;
    j["seed"] = seed;
  }
  if (kind == "single_mode") j["mode"] = mode;
  if (measure) j["measure"] = measure->to_json();
  return j;
}

DatumSpec DatumSpec::from_json(const nlohmann::json& j) {
  DatumSpec d;
  d.kind = j.value("kind", d.kind);
  d.amplitude = j.value("amplitude", d.amplitude);
  d.decay = j.value("decay", d.decay);
  d.rate = j.value("rate", d.rate);
  d.seed = j.value("seed", d.seed);
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    if (!m.is_array() || m.empty() || m.size() > 3)
      fail(ErrorKind::Validation, "datum.mode must be a list of 1 to 3 integers");
    d.mode = {0, 0, 0};
    for (std::size_t i = 0; i < m.size(); ++i) d.mode[i] = m[i].get<int>();
  }
  if (j.contains("measure")) d.measure = NormSpec::from_json(j.at("measure"));
  return d;
}

SpectralField taylor_green(const Grid& g, double amplitude) {
  g.validate();
  PhysicalField u(g, g.n_dims);
  const double kap = g.kappa();
  for (std::size_t m = 0; m < g.size(); ++m) {
    const auto x = grid_point(g, m);
    const double cx = std::cos(kap * x[0]), sx = std::sin(kap * x[0]);
    const double cy = std::cos(kap * x[1]), sy = std::sin(kap * x[1]);
    const double cz = g.n_dims == 3 ? std::cos(kap * x[2]) : 1.0;
    u.comp(0)[m] = amplitude * sx * cy * cz;
    u.comp(1)[m] = -amplitude * cx * sy * cz;
    if (g.n_dims == 3) u.comp(2)[m] = 0.0;
  }
  SpectralField f = leray_project(forward_transform(u));
  for (int c = 0; c < f.components; ++c) f.at(c, 0) = 0.0;
  f.divergence_free = true;
  return f;
}

SpectralField single_mode(const Grid& g, const std::array<int, 3>& k, double amplitude) {
  DatumSpec spec;
  spec.kind = "single_mode";
  spec.mode = k;
  spec.validate(g);
  // Polarization orthogonal to k: the rotated vector in 2D, k x e_axis in 3D
  // with the axis least aligned with k.
  std::array<double, 3> e{0, 0, 0};
  if (g.n_dims == 2) {
    e = {-double(k[1]), double(k[0]), 0.0};
  } else {
    int ax = 0;
    for (int d = 1; d < 3; ++d)
      if (std::abs(k[d]) < std::abs(k[ax])) ax = d;
    std::array<double, 3> a{0, 0, 0};
    a[ax] = 1.0;
    e = {k[1] * a[2] - k[2] * a[1], k[2] * a[0] - k[0] * a[2], k[0] * a[1] - k[1] * a[0]};
  }
  double en = 0.0;
  for (double v : e) en += v * v;
  en = std::sqrt(en);
  SpectralField f(g, g.n_dims);
  const std::size_t mp = g.flat(k), mm = g.flat({-k[0], -k[1], -k[2]});
  for (int c = 0; c < g.n_dims; ++c) {
    f.at(c, mp) = 0.5 * amplitude * e[c] / en;
    f.at(c, mm) = 0.5 * amplitude * e[c] / en;
  }
  f.divergence_free = true;
  return f;
}

namespace {

SpectralField finish_vector(SpectralField f) {
  f = leray_project(f);
  for (int c = 0; c < f.components; ++c) f.at(c, 0) = 0.0;
  hermitian_symmetrize(f);
  f.divergence_free = true;
  return f;
}

SpectralField unit_l2(SpectralField f) {
  const double e = std::sqrt(energy(f));
  if (e > 0.0) f *= 1.0 / e;
  return f;
}

}  // namespace

SpectralField init_data(const Grid& g, const DatumSpec& spec) {
  spec.validate(g);
  SpectralField u;
  if (spec.kind == "taylor_green") {
    u = taylor_green(g, 1.0);
  } else if (spec.kind == "single_mode") {
    u = single_mode(g, spec.mode, 1.0);
  } else if (spec.kind == "random_div_free") {
    u = unit_l2(finish_vector(gaussian_spectrum(g, g.n_dims, spec.decay, spec.seed)));
  } else {
    // Random directions, exact modulus e^{-rate |xi|_1} per mode.
    SpectralField w = finish_vector(gaussian_spectrum(g, g.n_dims, 0.0, spec.seed));
    const auto& L = lattice(g);
    for (std::size_t m = 1; m < g.size(); ++m) {
      double a = 0.0;
      for (int c = 0; c < g.n_dims; ++c) a += std::norm(w.at(c, m));
      a = std::sqrt(a);
      const double target = std::exp(-spec.rate * L.xi_l1[m]);
      for (int c = 0; c < g.n_dims; ++c) w.at(c, m) = a > 0.0 ? w.at(c, m) * (target / a) : 0.0;
    }
    u = unit_l2(w);
  }
  double scale = spec.amplitude;
  if (spec.measure) {
    const double v = norm(u, *spec.measure);
    if (!(v > 0.0)) fail(ErrorKind::Validation, "datum.measure: base field has zero norm");
    scale = spec.amplitude / v;
  }
  u *= scale;
  u.divergence_free = true;
  return u;
}

}  // namespace gevrey
