#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gevrey/grid.hpp"

namespace gevrey {

using cplx = std::complex<double>;

// Fourier coefficients on the full lattice, component-major, row-major within a
// component. Normalized so that cos(x1) has coefficient 1/2 at xi = (+-1, 0).
struct SpectralField {
  Grid grid;
  int components = 1;
  std::vector<cplx> data;
  bool divergence_free = false;

  SpectralField() = default;
  SpectralField(const Grid& g, int comps);

  std::size_t modes() const { return grid.size(); }
  cplx* comp(int c) { return data.data() + static_cast<std::size_t>(c) * modes(); }
  const cplx* comp(int c) const { return data.data() + static_cast<std::size_t>(c) * modes(); }
  cplx& at(int c, std::size_t m) { return comp(c)[m]; }
  const cplx& at(int c, std::size_t m) const { return comp(c)[m]; }
  bool is_vector() const { return components > 1; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField f);

struct PhysicalField {
  Grid grid;
  int components = 1;
  std::vector<double> data;

  PhysicalField() = default;
  PhysicalField(const Grid& g, int comps);

  std::size_t points() const { return grid.size(); }
  double* comp(int c) { return data.data() + static_cast<std::size_t>(c) * points(); }
  const double* comp(int c) const { return data.data() + static_cast<std::size_t>(c) * points(); }
};

// Coordinates of collocation point m (row-major, axis 0 slowest).
std::array<double, 3> grid_point(const Grid& g, std::size_t m);

// max |c(xi) - conj c(-xi)| relative to the largest coefficient.
double hermitian_defect(const SpectralField& f);
// max over xi != 0 of |xi . u(xi)| / |u(xi)| for vector fields.
double divergence_defect(const SpectralField& u);
double max_coefficient(const SpectralField& f);
// sqrt(sum |c|^2) over all components.
double coefficient_l2(const SpectralField& f);
// Real L2 inner product via Parseval.
double inner_product(const SpectralField& f, const SpectralField& g);
// ||u||_2^2.
double energy(const SpectralField& u);
SpectralField component(const SpectralField& f, int c);
void check_compatible(const SpectralField& a, const SpectralField& b, const char* where);

}  // namespace gevrey
