#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gevrey/spaces.hpp"

namespace gevrey {

struct EnsembleSpec {
  int n_samples = 20;
  std::string field_law = "gaussian_spectrum";  // gaussian_spectrum | block_supported | analytic
  double decay = 2.0;
  int block_index = 3;
  double rate = 0.5;
  std::vector<int> resolutions{32, 64};
  std::uint64_t seed = 1;
  int n_dims = 2;
  double alpha = 1.0;            // ids that depend on the dissipation order
  std::vector<double> p_values;  // empty -> per-id defaults
  double drift_bound = 2.0;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  static EnsembleSpec from_json(const nlohmann::json& j);
};

// One inequality instance (fixed exponents/weights) within an id.
struct VerificationCase {
  std::string label;
  std::map<int, double> C_by_resolution;
  double drift = 1.0;
  bool pass = false;
};

struct VerificationReport {
  std::string inequality_id;
  std::vector<double> per_sample_ratio;
  double C_emp = 0.0;
  double resolution_drift = 1.0;
  std::map<int, double> C_by_resolution;
  std::vector<VerificationCase> cases;
  bool pass = false;
  std::string diagnostic;  // set when a ratio is non-finite
  EnsembleSpec spec;

  nlohmann::ordered_json to_json() const;
};

const std::vector<std::string>& inequality_ids();
VerificationReport verify(const std::string& inequality_id, const EnsembleSpec& spec);

struct CalibrationRecord {
  double alpha = 1.0;
  int n_dims = 2;
  int N = 64;
  Family family = Family::Besov;
  std::map<std::string, double> constants;  // C_emp per verify id
  double C = 1.0;  // constant consumed by smallness_check
  std::uint64_t seed = 1;
  EnsembleSpec ensemble;
  std::string digest;  // sha256 of the record without this field

  nlohmann::ordered_json to_json() const;
};

// Verifies the ids feeding the fixed-point constant at resolutions {N/2, N};
// throws CalibrationRefused if one fails. Memoized per argument tuple.
CalibrationRecord calibrate(double alpha, int n_dims, int N, Family family, std::uint64_t seed = 1);
// The ids calibrate() runs for a family.
std::vector<std::string> calibration_ids(Family family);

}  // namespace gevrey
