#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gevrey/field.hpp"

namespace gevrey {

enum class WeightKind {
  None,
  ExpSqrtT,           // e^{rate sqrt(t) Lambda}
  ExpLinearT,         // e^{rate t Lambda}
  ExpPowerT,          // e^{rate t^power Lambda}
  ExpModulationRate,  // 2^{s(t)|k|}, s(t) = rate * min(clamp, t)
};

const char* to_string(WeightKind k);
WeightKind weight_kind_from_string(const std::string& s);

// Exponents above this bound are refused rather than silently clamped.
inline constexpr double kWeightLogGuard = 50.0;

struct WeightSpec {
  WeightKind kind = WeightKind::None;
  double rate = 0.0;
  double power = 0.5;
  std::optional<double> clamp;

  void validate() const;
  bool is_lambda() const {
    return kind == WeightKind::ExpSqrtT || kind == WeightKind::ExpLinearT ||
           kind == WeightKind::ExpPowerT;
  }
  // Coefficient of Lambda (|xi|_1) in the exponent at time t; 0 for non-Lambda kinds.
  double theta(double t) const;
  // s(t) for the modulation-rate kind, 0 otherwise.
  double modulation_rate(double t) const;
  nlohmann::json to_json() const;
  static WeightSpec from_json(const nlohmann::json& j);

  static WeightSpec none() { return {}; }
  // e^{rate t^{1/2alpha} Lambda}, using the sqrt / linear kinds at the endpoints.
  static WeightSpec for_alpha(double alpha, double rate);
};

// e^{theta |xi|_1} f. Coefficients below noise_floor * max|c| are treated as
// round-off and dropped before weighting. Throws UnstableWeight when a kept
// coefficient would be amplified by more than e^50.
SpectralField apply_lambda_weight(const SpectralField& f, double theta, double noise_floor = 0.0);

}  // namespace gevrey
