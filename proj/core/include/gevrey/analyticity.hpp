#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gevrey/solver.hpp"

namespace gevrey {

// Shells are selected by their max amplitude relative to the peak shell.
struct RadiusWindow {
  double rel_min = 1e-13;
  double rel_max = 1e-3;
  // When fewer than min_shells fall in [rel_min, rel_max] the upper bound is
  // lifted to the peak (slowly decaying spectra never reach rel_max on the grid).
  int min_shells = 4;
};

struct RadiusFit {
  double t = 0.0;
  double radius = 0.0;
  double fit_residual = 0.0;
  double window_min = 0.0;  // |xi|_1 range used
  double window_max = 0.0;
  int shells = 0;
  bool widened = false;
};

// Max coefficient modulus on each l1 shell |k|_1 = r of the dealiased lattice,
// indexed by r.
std::vector<double> shell_amplitudes(const SpectralField& f);
RadiusFit radius_fit(const SpectralField& f, const RadiusWindow& window = {});

struct MonitorResult {
  std::vector<double> times;
  std::vector<double> values;
  std::optional<std::size_t> alarm_index;  // first value above twice the initial one
};
// Weight e^{rate t^{1/2alpha} Lambda} on top of `norm` (rate 0: unweighted).
MonitorResult gevrey_norm_monitor(const EvolutionTrace& tr, double alpha, double rate,
                                  const NormSpec& norm);

struct GrowthResult {
  double exponent = 0.0;
  double prefactor = 0.0;
  std::vector<RadiusFit> per_time;
  std::vector<std::string> warnings;
  MonitorResult monitor;
};
GrowthResult radius_growth_experiment(const SpectralField& u0, double alpha,
                                      const std::vector<double>& t_list, const SolverConfig& cfg,
                                      const RadiusWindow& window = {});

// radius_report.csv body and growth_report.json.
std::string radius_csv(const std::vector<RadiusFit>& fits);
nlohmann::ordered_json growth_json(const GrowthResult& g, const std::string& config_digest);

}  // namespace gevrey
