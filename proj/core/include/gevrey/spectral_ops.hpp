#pragma once

#include <array>
#include <functional>
#include <vector>

#include "gevrey/field.hpp"

namespace gevrey {

using Multiplier = std::function<cplx(const std::array<double, 3>& xi)>;

// Coefficient-wise product. Nyquist modes are zeroed in the result since an
// odd symbol cannot stay Hermitian there.
SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m);
// Real symbol tabulated on the lattice (one value per mode).
SpectralField apply_multiplier(const SpectralField& f, const std::vector<double>& table);

SpectralField leray_project(const SpectralField& u);
// Zero every mode with some |k_i| > N/3.
SpectralField dealias(const SpectralField& f);
// Dealiased pointwise product of two scalar fields.
SpectralField product(const SpectralField& f, const SpectralField& g);
// Dealiased product of complex-valued scalar fields (no symmetry assumed).
SpectralField complex_product(const SpectralField& f, const SpectralField& g);
// P div(u (x) u) with u dealiased first.
SpectralField nonlinear_term(const SpectralField& u);
SpectralField recover_pressure(const SpectralField& u);
SpectralField derivative(const SpectralField& f, int axis, int order = 1);
SpectralField divergence(const SpectralField& u);
// (-Delta)^{s/2}.
SpectralField fractional_laplacian(const SpectralField& f, double s);

}  // namespace gevrey
