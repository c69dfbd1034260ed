#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gevrey/decomposition.hpp"
#include "gevrey/transform.hpp"
#include "gevrey/weight.hpp"

namespace gevrey {

enum class Family { Besov, Modulation, ExpModulation };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

struct NormSpec {
  Family family = Family::Besov;
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  double gamma = kInf;  // time exponent for trace norms
  WeightSpec weight;
  bool l1_index = false;     // |k|_1 instead of |k| in exponential modulation weights
  double noise_floor = 0.0;  // relative round-off floor applied before Lambda weights
  std::string name;          // column label; generated when empty

  std::string label() const;

  void validate() const;
  nlohmann::json to_json() const;
  static NormSpec from_json(const nlohmann::json& j);
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::vector<std::map<std::string, double>> diagnostics;

  void validate() const;
  void push(double t, SpectralField u);
  bool empty() const { return times.empty(); }
  std::size_t size() const { return times.size(); }
  const Grid& grid() const { return states.front().grid; }
};

// Cached systems with the default profile.
const DyadicSystem& dyadic_for(const Grid& g);
const UniformSystem& uniform_for(const Grid& g);

double besov_norm(const SpectralField& f, double s, double p, double q, const DyadicSystem& sys);
double modulation_norm(const SpectralField& f, double s, double p, double q, const UniformSystem& sys);
double exp_modulation_norm(const SpectralField& f, double s, double p, double q,
                           const UniformSystem& sys, bool l1_index = false);
double chemin_lerner_norm(const EvolutionTrace& tr, double gamma, double s, double p, double q,
                          const DyadicSystem& sys, const WeightSpec& weight = {});
double time_exp_modulation_norm(const EvolutionTrace& tr, const WeightSpec& s_of_t, double q_time,
                                double p, double q, const UniformSystem& sys, bool l1_index = false);

// Dispatch on spec.family for a single field (Lambda weight evaluated at time t).
double norm(const SpectralField& f, const NormSpec& spec, double t = 0.0);
// Time-space norm of a trace: L^gamma in time inside each block, then l^q.
double trace_norm(const EvolutionTrace& tr, const NormSpec& spec);
// trace_norm restricted to [t_0, t_i] for every i; nondecreasing.
std::vector<double> cumulative_trace_norm(const EvolutionTrace& tr, const NormSpec& spec);

// Streaming form of trace_norm: feed states in time order, read the norm on
// [t_first, t_last] at any point. A single sample gives 0 for finite gamma.
class TraceNormAccumulator {
 public:
  TraceNormAccumulator(const NormSpec& spec, const Grid& g);
  void push(double t, const SpectralField& u);
  double value() const;
  const NormSpec& spec() const { return spec_; }

 private:
  NormSpec spec_;
  std::vector<double> log_weight_, mod_index_, prev_, acc_;
  double t_prev_ = 0.0;
  std::size_t count_ = 0;
};

struct GevreyFit {
  double rho = 0.0;
  double M = 0.0;
  double residual = 0.0;
  std::vector<double> y;  // log(||d^m f||_p / m!)
};
GevreyFit gevrey_membership(const SpectralField& f, double p, int max_order);

// {family, s, p, q, gamma, weight, value, truncation, grid}
nlohmann::json norm_report(const NormSpec& spec, const Grid& g, double value);
// JSON-safe number: infinities become the string "inf".
nlohmann::json exponent_json(double v);
double exponent_from_json(const nlohmann::json& j);

}  // namespace gevrey
