#include "gevrey/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gevrey/error.hpp"

namespace gevrey {

SpectralField::SpectralField(const Grid& g, int comps) : grid(g), components(comps) {
  g.validate();
  if (comps < 1) fail(ErrorKind::InvalidParameter, "field needs at least one component");
  data.assign(static_cast<std::size_t>(comps) * g.size(), cplx(0.0, 0.0));
}

void check_compatible(const SpectralField& a, const SpectralField& b, const char* where) {
  if (a.grid != b.grid || a.components != b.components)
    fail(ErrorKind::InvalidParameter, std::string(where) + ": incompatible fields");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_compatible(*this, o, "operator+=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_compatible(*this, o, "operator-=");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  divergence_free = divergence_free && o.divergence_free;
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : data) c *= a;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double a, SpectralField f) { return f *= a; }

PhysicalField::PhysicalField(const Grid& g, int comps) : grid(g), components(comps) {
  g.validate();
  data.assign(static_cast<std::size_t>(comps) * g.size(), 0.0);
}

std::array<double, 3> grid_point(const Grid& g, std::size_t m) {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = g.period / g.N;
  for (int d = g.n_dims - 1; d >= 0; --d) {
    x[d] = h * static_cast<double>(m % g.N);
    m /= g.N;
  }
  return x;
}

double max_coefficient(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.data) m = std::max(m, std::abs(c));
  return m;
}

double hermitian_defect(const SpectralField& f) {
  const auto& L = lattice(f.grid);
  const double scale = max_coefficient(f);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int c = 0; c < f.components; ++c) {
    const cplx* a = f.comp(c);
    for (std::size_t m = 0; m < f.modes(); ++m)
      worst = std::max(worst, std::abs(a[m] - std::conj(a[L.conj[m]])));
  }
  return worst / scale;
}

double divergence_defect(const SpectralField& u) {
  if (u.components != u.grid.n_dims) return 0.0;
  const auto& L = lattice(u.grid);
  double worst = 0.0;
  for (std::size_t m = 0; m < u.modes(); ++m) {
    if (L.xi2[m] == 0.0) continue;
    cplx dot = 0.0;
    double mag2 = 0.0;
    for (int d = 0; d < u.components; ++d) {
      dot += L.xi(m, d) * u.at(d, m);
      mag2 += std::norm(u.at(d, m));
    }
    if (mag2 == 0.0) continue;
    worst = std::max(worst, std::abs(dot) / (std::sqrt(mag2) * L.xi_abs[m]));
  }
  return worst;
}

double coefficient_l2(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.data) s += std::norm(c);
  return std::sqrt(s);
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  check_compatible(f, g, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < f.data.size(); ++i) s += (std::conj(f.data[i]) * g.data[i]).real();
  return s * f.grid.volume();
}

double energy(const SpectralField& u) {
  double s = 0.0;
  for (const auto& c : u.data) s += std::norm(c);
  return s * u.grid.volume();
}

SpectralField component(const SpectralField& f, int c) {
  if (c < 0 || c >= f.components) fail(ErrorKind::IndexError, "component index out of range");
  SpectralField out(f.grid, 1);
  std::copy(f.comp(c), f.comp(c) + f.modes(), out.data.begin());
  return out;
}

}  // namespace gevrey
