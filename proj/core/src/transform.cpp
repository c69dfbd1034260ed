#include "gevrey/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "gevrey/error.hpp"

namespace gevrey {

namespace {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using Buffer = std::unique_ptr<T[], FftwFree>;

template <class T>
Buffer<T> alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!p) fail(ErrorKind::Io, "fftw_malloc failed");
  return Buffer<T>(p);
}

enum class Kind { R2C, C2R, C2C_F, C2C_B };

// FFTW planning is not thread-safe; executing an existing plan on new arrays is.
fftw_plan plan_for(const Grid& g, Kind kind) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n_dims, g.N, static_cast<int>(kind));
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  int dims[3] = {g.N, g.N, g.N};
  const std::size_t n = g.size();
  const std::size_t nh = n / g.N * (g.N / 2 + 1);
  fftw_plan p = nullptr;
  switch (kind) {
    case Kind::R2C: {
      auto in = alloc<double>(n);
      auto out = alloc<fftw_complex>(nh);
      p = fftw_plan_dft_r2c(g.n_dims, dims, in.get(), out.get(), FFTW_ESTIMATE);
      break;
    }
    case Kind::C2R: {
      auto in = alloc<fftw_complex>(nh);
      auto out = alloc<double>(n);
      p = fftw_plan_dft_c2r(g.n_dims, dims, in.get(), out.get(), FFTW_ESTIMATE);
      break;
    }
    case Kind::C2C_F:
    case Kind::C2C_B: {
      auto in = alloc<fftw_complex>(n);
      auto out = alloc<fftw_complex>(n);
      p = fftw_plan_dft(g.n_dims, dims, in.get(), out.get(),
                        kind == Kind::C2C_F ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
      break;
    }
  }
  if (!p) fail(ErrorKind::Io, "FFTW planning failed");
  plans.emplace(key, p);
  return p;
}

// Flat index of the half-complex slot for full index m (last axis < N/2 + 1).
inline std::size_t half_index(const Grid& g, std::size_t m) {
  const std::size_t last = m % g.N;
  return (m / g.N) * (g.N / 2 + 1) + last;
}

}  // namespace

void check_exponent(double p, const char* name) {
  if (std::isnan(p) || p < 1.0)
    fail(ErrorKind::InvalidParameter, std::string(name) + " must lie in [1, inf]");
}

SpectralField forward_transform(const PhysicalField& f) {
  const Grid& g = f.grid;
  const std::size_t n = g.size();
  for (double v : f.data)
    if (!std::isfinite(v)) fail(ErrorKind::RejectedInput, "forward_transform: non-finite sample");
  const auto& L = lattice(g);
  const std::size_t nh = n / g.N * (g.N / 2 + 1);
  auto in = alloc<double>(n);
  auto out = alloc<fftw_complex>(nh);
  fftw_plan p = plan_for(g, Kind::R2C);
  SpectralField s(g, f.components);
  const double norm = 1.0 / static_cast<double>(n);
  for (int c = 0; c < f.components; ++c) {
    std::copy(f.comp(c), f.comp(c) + n, in.get());
    fftw_execute_dft_r2c(p, in.get(), out.get());
    cplx* dst = s.comp(c);
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t last = m % g.N;
      if (last <= static_cast<std::size_t>(g.N / 2)) {
        const auto& v = out[half_index(g, m)];
        dst[m] = cplx(v[0], v[1]) * norm;
      }
    }
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t last = m % g.N;
      if (last > static_cast<std::size_t>(g.N / 2)) dst[m] = std::conj(dst[L.conj[m]]);
    }
  }
  return s;
}

PhysicalField inverse_transform(const SpectralField& f) {
  const Grid& g = f.grid;
  const double defect = hermitian_defect(f);
  if (defect > 1e-12)
    fail(ErrorKind::CorruptedField,
         "inverse_transform: Hermitian symmetry violated (relative defect " +
             std::to_string(defect) + ")");
  const auto& L = lattice(g);
  const std::size_t n = g.size();
  const std::size_t nh = n / g.N * (g.N / 2 + 1);
  auto in = alloc<fftw_complex>(nh);
  auto out = alloc<double>(n);
  fftw_plan p = plan_for(g, Kind::C2R);
  PhysicalField r(g, f.components);
  for (int c = 0; c < f.components; ++c) {
    const cplx* src = f.comp(c);
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t last = m % g.N;
      if (last <= static_cast<std::size_t>(g.N / 2)) {
        const cplx v = 0.5 * (src[m] + std::conj(src[L.conj[m]]));
        auto& dst = in[half_index(g, m)];
        dst[0] = v.real();
        dst[1] = v.imag();
      }
    }
    fftw_execute_dft_c2r(p, in.get(), out.get());
    std::copy(out.get(), out.get() + n, r.comp(c));
  }
  return r;
}

std::vector<cplx> inverse_complex(const SpectralField& f, int component) {
  const Grid& g = f.grid;
  const std::size_t n = g.size();
  auto in = alloc<fftw_complex>(n);
  auto out = alloc<fftw_complex>(n);
  fftw_plan p = plan_for(g, Kind::C2C_B);
  const cplx* src = f.comp(component);
  for (std::size_t m = 0; m < n; ++m) {
    in[m][0] = src[m].real();
    in[m][1] = src[m].imag();
  }
  fftw_execute_dft(p, in.get(), out.get());
  std::vector<cplx> r(n);
  for (std::size_t m = 0; m < n; ++m) r[m] = cplx(out[m][0], out[m][1]);
  return r;
}

SpectralField forward_complex(const Grid& g, const std::vector<std::vector<cplx>>& samples) {
  const std::size_t n = g.size();
  auto in = alloc<fftw_complex>(n);
  auto out = alloc<fftw_complex>(n);
  fftw_plan p = plan_for(g, Kind::C2C_F);
  SpectralField s(g, static_cast<int>(samples.size()));
  const double norm = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < samples.size(); ++c) {
    if (samples[c].size() != n) fail(ErrorKind::InvalidParameter, "forward_complex: bad size");
    for (std::size_t m = 0; m < n; ++m) {
      if (!std::isfinite(samples[c][m].real()) || !std::isfinite(samples[c][m].imag()))
        fail(ErrorKind::RejectedInput, "forward_complex: non-finite sample");
      in[m][0] = samples[c][m].real();
      in[m][1] = samples[c][m].imag();
    }
    fftw_execute_dft(p, in.get(), out.get());
    cplx* dst = s.comp(static_cast<int>(c));
    for (std::size_t m = 0; m < n; ++m) dst[m] = cplx(out[m][0], out[m][1]) * norm;
  }
  return s;
}

namespace {

template <class Mag>
double lp_from_magnitudes(const Grid& g, std::size_t n, Mag mag, double p) {
  double mx = 0.0;
  for (std::size_t m = 0; m < n; ++m) mx = std::max(mx, mag(m));
  if (p == kInf || mx == 0.0) return mx;
  double s = 0.0;
  for (std::size_t m = 0; m < n; ++m) s += std::pow(mag(m) / mx, p);
  return mx * std::pow(s * g.cell_volume(), 1.0 / p);
}

}  // namespace

double lp_norm(const PhysicalField& f, double p) {
  check_exponent(p, "p");
  const std::size_t n = f.points();
  if (f.components == 1) {
    const double* a = f.comp(0);
    return lp_from_magnitudes(f.grid, n, [a](std::size_t m) { return std::abs(a[m]); }, p);
  }
  std::vector<double> mag(n, 0.0);
  for (int c = 0; c < f.components; ++c) {
    const double* a = f.comp(c);
    for (std::size_t m = 0; m < n; ++m) mag[m] += a[m] * a[m];
  }
  for (auto& v : mag) v = std::sqrt(v);
  return lp_from_magnitudes(f.grid, n, [&mag](std::size_t m) { return mag[m]; }, p);
}

double lp_norm_complex(const Grid& g, const std::vector<std::vector<cplx>>& samples, double p) {
  check_exponent(p, "p");
  const std::size_t n = g.size();
  std::vector<double> mag(n, 0.0);
  for (const auto& comp : samples)
    for (std::size_t m = 0; m < n; ++m) mag[m] += std::norm(comp[m]);
  for (auto& v : mag) v = std::sqrt(v);
  return lp_from_magnitudes(g, n, [&mag](std::size_t m) { return mag[m]; }, p);
}

double lp_norm(const SpectralField& f, double p) {
  check_exponent(p, "p");
  if (p == 2.0) return std::sqrt(energy(f));
  if (hermitian_defect(f) <= 1e-12) return lp_norm(inverse_transform(f), p);
  std::vector<std::vector<cplx>> samples;
  for (int c = 0; c < f.components; ++c) samples.push_back(inverse_complex(f, c));
  return lp_norm_complex(f.grid, samples, p);
}

}  // namespace gevrey
