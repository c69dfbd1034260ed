#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gevrey/semigroup.hpp"

namespace gevrey {

// Function-space setting: selects the Picard metric, the continuation
// functional and the smallness test.
enum class Scheme {
  Besov,       // alpha = 1: L~3 B^{n/p-1/3} and L~3/2 B^{n/p+1/3}, weight e^{sqrt(t) Lambda}
  Modulation,  // alpha = 1: L~2 E^{ct}_{p,1}, c = 2^-10
  Half,        // alpha = 1/2: L~inf and L~1 in B^{n/p}, B^{n/p+1}, weight e^{t Lambda / 2n}
  Fractional,  // alpha in (1/2,1): L~gamma+- B^{n/p +- eps}, weight e^{t^{1/2alpha} Lambda}
};

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

inline constexpr double kModulationRate = 1.0 / 1024.0;
// Relative floor used by every Lambda-weighted metric and monitor.
inline constexpr double kWeightNoiseFloor = 1e-13;

struct SolverConfig {
  double alpha = 1.0;
  double T = 1.0;
  double dt = 1e-3;
  int n_picard = 8;
  int picard_time_samples = 65;
  NormSpec smallness_space;
  double delta = 0.5;
  WeightSpec weight;  // Gevrey monitor weight
  double gns_epsilon = 0.1;
  std::vector<NormSpec> continuation_norms;  // also the Picard metric

  bool nonlinear = true;
  double picard_tol = 1e-10;  // relative convergence threshold
  std::vector<double> output_times;  // stepper records; empty -> n_records uniform
  int n_records = 10;
  std::vector<NormSpec> diagnostic_norms;
  std::optional<double> calibrated_constant;  // skips calibrate() in smallness_check

  void validate() const;
  nlohmann::ordered_json to_json() const;
  // A "scheme" key seeds the spaces from scheme_config before explicit keys apply.
  static SolverConfig from_json(const nlohmann::json& j, int n_dims = 2);
};

// Config whose spaces follow `scheme` on an n-dimensional grid with exponent p.
SolverConfig scheme_config(Scheme scheme, int n_dims, double p = 2.0, double alpha = 1.0,
                           double eps = 0.1);
// Critical space B^{n/p - 2 alpha + 1}_{p,1}.
NormSpec critical_space(int n_dims, double alpha, double p = 2.0);

struct PicardReport {
  std::vector<double> iterate_distances;
  std::vector<double> contraction_ratios;
  bool converged = false;
  bool diverged = false;
  double final_norm = 0.0;  // metric norm of the last iterate
  EvolutionTrace final_trace;

  nlohmann::ordered_json to_json() const;
};

// Merge of a geometric grid (first point T*1e-6) and a uniform grid, M points
// in total including 0.
std::vector<double> picard_time_grid(double T, int M);

// Distance in the configured metric: max over the norms.
double metric_distance(const EvolutionTrace& a, const EvolutionTrace& b,
                       const std::vector<NormSpec>& metric);
double metric_norm(const EvolutionTrace& a, const std::vector<NormSpec>& metric);

PicardReport picard_solve(const SpectralField& u0, const SolverConfig& cfg,
                          const EvolutionTrace* initial_guess = nullptr);
// Picard on [t0, t0 + length] started from u_start; trace times are absolute.
PicardReport picard_interval(const SpectralField& u_start, double t0, double length,
                             const SolverConfig& cfg, const EvolutionTrace* initial_guess = nullptr);

struct StepResult {
  EvolutionTrace trace;
  std::vector<std::string> warnings;
  double energy_balance_defect = 0.0;  // max relative defect over recorded times
};

StepResult step_solve(const SpectralField& u0, const SolverConfig& cfg);

struct Smallness {
  double norm = 0.0;
  double threshold = 0.0;
  bool pass = false;
};
Smallness smallness_check(const SpectralField& u0, const SolverConfig& cfg);

double continuation_functional(const EvolutionTrace& tr, const SolverConfig& cfg);
// The functional on every prefix of the trace.
std::vector<double> continuation_profile(const EvolutionTrace& tr, const SolverConfig& cfg);

double scaling_symmetry_check(const SpectralField& u0, int lambda, const SolverConfig& cfg);

// Step-by-step extension of the modulation scheme over [0, T]: interval m uses
// the ball radius delta_0 = 1/(4C) for m = 0 and delta_m with
// C 2^{4 c max(2, t_{m+1})} delta_m = 1/4 afterwards.
struct RestartInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  double delta = 0.0;
  double linear_norm = 0.0;  // metric norm of the free evolution on the interval
  double solution_norm = 0.0;
  bool in_ball = false;
  PicardReport picard;
};
std::vector<RestartInterval> restart_schedule(const SpectralField& u0, const SolverConfig& cfg,
                                              const std::vector<double>& breakpoints, double C);

// config.json, state_NNNN snapshots and diagnostics.csv; returns files written.
std::vector<std::filesystem::path> persist_solve(const std::filesystem::path& dir,
                                                 const SolverConfig& cfg,
                                                 const EvolutionTrace& tr);
// Column order of diagnostics.csv.
std::vector<std::string> diagnostics_columns(const SolverConfig& cfg);

}  // namespace gevrey
