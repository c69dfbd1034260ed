#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gevrey/spaces.hpp"

namespace gevrey {

// Initial data. Every kind yields a divergence-free, zero-mean, Hermitian
// vector field. With `measure` set the field is rescaled so that its norm in
// that space equals `amplitude`; otherwise amplitude multiplies the base
// shape (unit-amplitude Taylor-Green, unit-amplitude cosine, unit L2 norm for
// the random and analytic kinds).
struct DatumSpec {
  std::string kind = "taylor_green";  // taylor_green | random_div_free | single_mode | analytic
  double amplitude = 1.0;
  double decay = 2.0;  // random_div_free: envelope (1 + |xi|)^{-decay}
  double rate = 0.5;   // analytic: |u(xi)| = e^{-rate |xi|_1}
  std::uint64_t seed = 0;
  std::array<int, 3> mode{1, 0, 0};  // single_mode wavevector
  std::optional<NormSpec> measure;

  void validate(const Grid& g) const;
  nlohmann::ordered_json to_json() const;
  static DatumSpec from_json(const nlohmann::json& j);
};

SpectralField init_data(const Grid& g, const DatumSpec& spec);

SpectralField taylor_green(const Grid& g, double amplitude = 1.0);
SpectralField single_mode(const Grid& g, const std::array<int, 3>& k, double amplitude = 1.0);

}  // namespace gevrey
