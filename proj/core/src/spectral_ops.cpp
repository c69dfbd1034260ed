#include "gevrey/spectral_ops.hpp"

#include <cmath>
#include <string>

#include "gevrey/error.hpp"
#include "gevrey/transform.hpp"

namespace gevrey {

SpectralField apply_multiplier(const SpectralField& f, const Multiplier& mult) {
  const auto& L = lattice(f.grid);
  SpectralField out(f.grid, f.components);
  for (std::size_t m = 0; m < f.modes(); ++m) {
    if (L.nyquist[m]) continue;
    const cplx v = mult(L.xi_vec(m));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorKind::InvalidParameter, "apply_multiplier: non-finite multiplier value");
    for (int c = 0; c < f.components; ++c) out.at(c, m) = v * f.at(c, m);
  }
  out.divergence_free = f.divergence_free;
  return out;
}

SpectralField apply_multiplier(const SpectralField& f, const std::vector<double>& table) {
  if (table.size() != f.modes())
    fail(ErrorKind::InvalidParameter, "apply_multiplier: table size mismatch");
  const auto& L = lattice(f.grid);
  SpectralField out(f.grid, f.components);
  for (std::size_t m = 0; m < f.modes(); ++m) {
    if (L.nyquist[m]) continue;
    if (!std::isfinite(table[m]))
      fail(ErrorKind::InvalidParameter, "apply_multiplier: non-finite multiplier value");
    for (int c = 0; c < f.components; ++c) out.at(c, m) = table[m] * f.at(c, m);
  }
  out.divergence_free = f.divergence_free;
  return out;
}

SpectralField leray_project(const SpectralField& u) {
  const int n = u.grid.n_dims;
  if (u.components != n)
    fail(ErrorKind::InvalidParameter, "leray_project: expected a vector field");
  const auto& L = lattice(u.grid);
  SpectralField out = u;
  for (std::size_t m = 0; m < u.modes(); ++m) {
    if (L.xi2[m] == 0.0) continue;
    cplx dot = 0.0;
    for (int d = 0; d < n; ++d) dot += L.xi(m, d) * u.at(d, m);
    for (int d = 0; d < n; ++d) out.at(d, m) = u.at(d, m) - L.xi(m, d) * dot / L.xi2[m];
  }
  out.divergence_free = true;
  return out;
}

SpectralField dealias(const SpectralField& f) {
  const auto& L = lattice(f.grid);
  SpectralField out = f;
  for (std::size_t m = 0; m < f.modes(); ++m)
    if (!L.kept[m] || L.nyquist[m])
      for (int c = 0; c < f.components; ++c) out.at(c, m) = 0.0;
  return out;
}

SpectralField product(const SpectralField& f, const SpectralField& g) {
  if (f.components != 1 || g.components != 1)
    fail(ErrorKind::InvalidParameter, "product: scalar fields expected");
  check_compatible(f, g, "product");
  PhysicalField a = inverse_transform(dealias(f));
  PhysicalField b = inverse_transform(dealias(g));
  for (std::size_t m = 0; m < a.data.size(); ++m) a.data[m] *= b.data[m];
  return dealias(forward_transform(a));
}

SpectralField complex_product(const SpectralField& f, const SpectralField& g) {
  if (f.components != 1 || g.components != 1)
    fail(ErrorKind::InvalidParameter, "complex_product: scalar fields expected");
  check_compatible(f, g, "complex_product");
  auto a = inverse_complex(dealias(f), 0);
  auto b = inverse_complex(dealias(g), 0);
  for (std::size_t m = 0; m < a.size(); ++m) a[m] *= b[m];
  return dealias(forward_complex(f.grid, {a}));
}

SpectralField nonlinear_term(const SpectralField& u) {
  const Grid& g = u.grid;
  const int n = g.n_dims;
  if (u.components != n) fail(ErrorKind::InvalidParameter, "nonlinear_term: vector field expected");
  const auto& L = lattice(g);
  PhysicalField up = inverse_transform(dealias(u));
  const std::size_t np = g.size();
  SpectralField div(g, n);
  PhysicalField prod(g, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double* a = up.comp(i);
      const double* b = up.comp(j);
      for (std::size_t m = 0; m < np; ++m) prod.data[m] = a[m] * b[m];
      SpectralField uij = dealias(forward_transform(prod));
      for (std::size_t m = 0; m < np; ++m) {
        if (!L.kept[m] || L.nyquist[m]) continue;
        const cplx v = uij.at(0, m);
        div.at(i, m) += cplx(0.0, L.xi(m, j)) * v;
        if (j != i) div.at(j, m) += cplx(0.0, L.xi(m, i)) * v;
      }
    }
  }
  return leray_project(div);
}

SpectralField recover_pressure(const SpectralField& u) {
  const Grid& g = u.grid;
  const int n = g.n_dims;
  if (u.components != n) fail(ErrorKind::InvalidParameter, "recover_pressure: vector field expected");
  const auto& L = lattice(g);
  PhysicalField up = inverse_transform(dealias(u));
  const std::size_t np = g.size();
  SpectralField p(g, 1);
  PhysicalField prod(g, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double* a = up.comp(i);
      const double* b = up.comp(j);
      for (std::size_t m = 0; m < np; ++m) prod.data[m] = a[m] * b[m];
      SpectralField uij = dealias(forward_transform(prod));
      const double sym = (i == j) ? 1.0 : 2.0;
      for (std::size_t m = 0; m < np; ++m) {
        if (L.xi2[m] == 0.0 || !L.kept[m] || L.nyquist[m]) continue;
        p.at(0, m) -= sym * L.xi(m, i) * L.xi(m, j) * uij.at(0, m) / L.xi2[m];
      }
    }
  }
  return p;
}

SpectralField derivative(const SpectralField& f, int axis, int order) {
  if (axis < 0 || axis >= f.grid.n_dims) fail(ErrorKind::IndexError, "derivative: bad axis");
  if (order < 0) fail(ErrorKind::InvalidParameter, "derivative: negative order");
  const auto& L = lattice(f.grid);
  SpectralField out(f.grid, f.components);
  for (std::size_t m = 0; m < f.modes(); ++m) {
    if (L.nyquist[m]) continue;
    static const cplx phase[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const cplx v = std::pow(L.xi(m, axis), order) * phase[order % 4];
    for (int c = 0; c < f.components; ++c) out.at(c, m) = v * f.at(c, m);
  }
  return out;
}

SpectralField divergence(const SpectralField& u) {
  if (u.components != u.grid.n_dims) fail(ErrorKind::InvalidParameter, "divergence: vector field expected");
  const auto& L = lattice(u.grid);
  SpectralField out(u.grid, 1);
  for (std::size_t m = 0; m < u.modes(); ++m) {
    if (L.nyquist[m]) continue;
    cplx s = 0.0;
    for (int d = 0; d < u.components; ++d) s += cplx(0.0, L.xi(m, d)) * u.at(d, m);
    out.at(0, m) = s;
  }
  return out;
}

SpectralField fractional_laplacian(const SpectralField& f, double s) {
  const auto& L = lattice(f.grid);
  std::vector<double> t(f.modes());
  for (std::size_t m = 0; m < t.size(); ++m)
    t[m] = L.xi2[m] == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(L.xi_abs[m], s);
  return apply_multiplier(f, t);
}

}  // namespace gevrey
