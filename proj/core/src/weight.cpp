#include "gevrey/weight.hpp"

#include <cmath>

#include "gevrey/error.hpp"

namespace gevrey {

const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::None: return "none";
    case WeightKind::ExpSqrtT: return "exp_sqrt_t_lambda";
    case WeightKind::ExpLinearT: return "exp_linear_t_lambda";
    case WeightKind::ExpPowerT: return "exp_power_t_lambda";
    case WeightKind::ExpModulationRate: return "exp_modulation_rate";
  }
  return "none";
}

WeightKind weight_kind_from_string(const std::string& s) {
  if (s == "none") return WeightKind::None;
  if (s == "exp_sqrt_t_lambda") return WeightKind::ExpSqrtT;
  if (s == "exp_linear_t_lambda") return WeightKind::ExpLinearT;
  if (s == "exp_power_t_lambda") return WeightKind::ExpPowerT;
  if (s == "exp_modulation_rate") return WeightKind::ExpModulationRate;
  fail(ErrorKind::Validation, "weight.kind: unknown value '" + s + "'");
}

void WeightSpec::validate() const {
  if (!std::isfinite(rate) || rate < 0.0)
    fail(ErrorKind::Validation, "weight.rate must be finite and >= 0");
  if (kind == WeightKind::ExpPowerT && !(power >= 0.5 && power <= 1.0))
    fail(ErrorKind::Validation, "weight.power must lie in [1/2, 1]");
  if (clamp && !(*clamp > 0.0)) fail(ErrorKind::Validation, "weight.clamp must be positive");
}

double WeightSpec::theta(double t) const {
  const double tt = clamp ? std::min(*clamp, t) : t;
  switch (kind) {
    case WeightKind::ExpSqrtT: return rate * std::sqrt(tt);
    case WeightKind::ExpLinearT: return rate * tt;
    case WeightKind::ExpPowerT: return rate * std::pow(tt, power);
    default: return 0.0;
  }
}

double WeightSpec::modulation_rate(double t) const {
  if (kind != WeightKind::ExpModulationRate) return 0.0;
  return rate * (clamp ? std::min(*clamp, t) : t);
}

nlohmann::json WeightSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  j["rate"] = rate;
  if (kind == WeightKind::ExpPowerT) j["power"] = power;
  if (clamp) j["clamp"] = *clamp;
  return j;
}

WeightSpec WeightSpec::from_json(const nlohmann::json& j) {
  WeightSpec w;
  w.kind = weight_kind_from_string(j.value("kind", "none"));
  w.rate = j.value("rate", 0.0);
  w.power = j.value("power", 0.5);
  if (j.contains("clamp")) w.clamp = j.at("clamp").get<double>();
  w.validate();
  return w;
}

WeightSpec WeightSpec::for_alpha(double alpha, double rate) {
  WeightSpec w;
  w.rate = rate;
  w.power = 1.0 / (2.0 * alpha);
  if (alpha == 1.0)
    w.kind = WeightKind::ExpSqrtT;
  else if (alpha == 0.5)
    w.kind = WeightKind::ExpLinearT;
  else
    w.kind = WeightKind::ExpPowerT;
  w.validate();
  return w;
}

SpectralField apply_lambda_weight(const SpectralField& f, double theta, double noise_floor) {
  if (theta == 0.0 && noise_floor == 0.0) return f;
  const auto& L = lattice(f.grid);
  const double cut = noise_floor * max_coefficient(f);
  SpectralField out(f.grid, f.components);
  out.divergence_free = f.divergence_free;
  for (std::size_t m = 0; m < f.modes(); ++m) {
    const double e = theta * L.xi_l1[m];
    for (int c = 0; c < f.components; ++c) {
      const cplx v = f.at(c, m);
      if (v == cplx(0.0) || std::abs(v) < cut) continue;
      if (e > kWeightLogGuard)
        fail(ErrorKind::UnstableWeight, "weight exponent " + std::to_string(e) +
                                            " exceeds guard e^50 at |xi|_1 = " +
                                            std::to_string(L.xi_l1[m]));
      out.at(c, m) = v * std::exp(e);
    }
  }
  return out;
}

}  // namespace gevrey
