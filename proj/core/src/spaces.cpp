#include "gevrey/spaces.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>

#include "gevrey/error.hpp"
#include "gevrey/spectral_ops.hpp"

namespace gevrey {

const char* to_string(Family f) {
  switch (f) {
    case Family::Besov: return "besov";
    case Family::Modulation: return "modulation";
    case Family::ExpModulation: return "exp_modulation";
  }
  return "besov";
}

Family family_from_string(const std::string& s) {
  if (s == "besov") return Family::Besov;
  if (s == "modulation") return Family::Modulation;
  if (s == "exp_modulation") return Family::ExpModulation;
  fail(ErrorKind::Validation, "norm.family: unknown value '" + s + "'");
}

nlohmann::json exponent_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

double exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    fail(ErrorKind::Validation, "expected a number or \"inf\", got '" + s + "'");
  }
  return j.get<double>();
}

void NormSpec::validate() const {
  check_exponent(p, "norm.p");
  check_exponent(q, "norm.q");
  check_exponent(gamma, "norm.gamma");
  if (!std::isfinite(s)) fail(ErrorKind::Validation, "norm.s must be finite");
  if (family == Family::ExpModulation && s < 0.0)
    fail(ErrorKind::Validation, "norm.s must be >= 0 for exp_modulation");
  if (noise_floor < 0.0 || noise_floor >= 1.0)
    fail(ErrorKind::Validation, "norm.noise_floor must lie in [0, 1)");
  weight.validate();
}

nlohmann::json NormSpec::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = to_string(family);
  j["s"] = s;
  j["p"] = exponent_json(p);
  j["q"] = exponent_json(q);
  j["gamma"] = exponent_json(gamma);
  j["weight"] = weight.to_json();
  if (l1_index) j["l1_index"] = true;
  if (noise_floor > 0.0) j["noise_floor"] = noise_floor;
  if (!name.empty()) j["name"] = name;
  return j;
}

NormSpec NormSpec::from_json(const nlohmann::json& j) {
  NormSpec n;
  n.family = family_from_string(j.value("family", "besov"));
  n.s = j.value("s", 0.0);
  if (j.contains("p")) n.p = exponent_from_json(j.at("p"));
  if (j.contains("q")) n.q = exponent_from_json(j.at("q"));
  if (j.contains("gamma")) n.gamma = exponent_from_json(j.at("gamma"));
  if (j.contains("weight")) n.weight = WeightSpec::from_json(j.at("weight"));
  n.l1_index = j.value("l1_index", false);
  n.noise_floor = j.value("noise_floor", 0.0);
  n.name = j.value("name", std::string());
  n.validate();
  return n;
}

std::string NormSpec::label() const {
  if (!name.empty()) return name;
  auto num = [](double v) {
    if (std::isinf(v)) return std::string("inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  std::string l = std::string(to_string(family)) + "_s" + num(s) + "_p" + num(p) + "_q" + num(q);
  if (!std::isinf(gamma)) l += "_g" + num(gamma);
  if (weight.kind != WeightKind::None) l += std::string("_") + to_string(weight.kind);
  return l;
}

void EvolutionTrace::validate() const {
  if (times.size() != states.size())
    fail(ErrorKind::InvalidParameter, "trace: times and states differ in length");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      fail(ErrorKind::InvalidParameter, "trace: times must be strictly increasing");
    if (states[i].grid != states[0].grid)
      fail(ErrorKind::InvalidParameter, "trace: states must share one grid");
  }
}

void EvolutionTrace::push(double t, SpectralField u) {
  if (!times.empty() && !(t > times.back()))
    fail(ErrorKind::InvalidParameter, "trace: times must be strictly increasing");
  times.push_back(t);
  states.push_back(std::move(u));
  diagnostics.emplace_back();
}

const DyadicSystem& dyadic_for(const Grid& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<DyadicSystem>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n_dims, g.N, g.period);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<DyadicSystem>(build_dyadic(g))).first;
  return *it->second;
}

const UniformSystem& uniform_for(const Grid& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<UniformSystem>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(g.n_dims, g.N, g.period);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<UniformSystem>(build_uniform(g))).first;
  return *it->second;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// log of (sum_b e^{q x_b})^{1/q}, or max for q = inf.
double log_lq(const std::vector<double>& logs, double q) {
  double mx = kNegInf;
  for (double v : logs) mx = std::max(mx, v);
  if (mx == kNegInf || q == kInf) return mx;
  double s = 0.0;
  for (double v : logs)
    if (v != kNegInf) s += std::exp(q * (v - mx));
  return mx + std::log(s) / q;
}

double finish(double logv) {
  if (logv == kNegInf) return 0.0;
  if (logv > 700.0) fail(ErrorKind::Overflow, "norm value exceeds double range");
  return std::exp(logv);
}

double exp_index(const std::array<int, 3>& k, int n, bool l1) {
  double s = 0.0;
  for (int d = 0; d < n; ++d) s += l1 ? std::abs(k[d]) : double(k[d]) * k[d];
  return l1 ? s : std::sqrt(s);
}

// Per-block L^p norms and log-weights for a family; blocks are shells or cubes.
struct Blocks {
  std::vector<double> log_weight;           // time-independent part
  std::vector<double> mod_index;            // |k| for time-dependent 2^{s(t)|k|}, else 0
};

Blocks block_layout(const Grid& g, const NormSpec& spec) {
  Blocks b;
  if (spec.family == Family::Besov) {
    const auto& sys = dyadic_for(g);
    for (int j = sys.j_min; j <= sys.j_max; ++j) {
      b.log_weight.push_back(j * spec.s * std::log(2.0));
      b.mod_index.push_back(0.0);
    }
    return b;
  }
  const auto& sys = uniform_for(g);
  for (const auto& blk : sys.blocks) {
    const double kk = exp_index(blk.k, g.n_dims, spec.l1_index);
    if (spec.family == Family::Modulation) {
      double k2 = 0.0;
      for (int d = 0; d < g.n_dims; ++d) k2 += double(blk.k[d]) * blk.k[d];
      b.log_weight.push_back(0.5 * spec.s * std::log1p(k2));
    } else {
      b.log_weight.push_back(spec.s * kk * std::log(2.0));
    }
    b.mod_index.push_back(kk);
  }
  return b;
}

std::vector<double> block_norms(const SpectralField& f, const NormSpec& spec, double t) {
  SpectralField fw = spec.weight.is_lambda() || spec.noise_floor > 0.0
                         ? apply_lambda_weight(f, spec.weight.theta(t), spec.noise_floor)
                         : f;
  if (spec.family == Family::Besov) return dyadic_block_norms(fw, dyadic_for(f.grid), spec.p);
  return uniform_block_norms(fw, uniform_for(f.grid), spec.p);
}

// log of block time norms for every prefix [t_0, t_i]; result[i][b].
std::vector<std::vector<double>> prefix_block_logs(const EvolutionTrace& tr, const NormSpec& spec,
                                                   const Blocks& layout) {
  const std::size_t T = tr.size();
  const std::size_t B = layout.log_weight.size();
  std::vector<std::vector<double>> logs(T, std::vector<double>(B));
  for (std::size_t i = 0; i < T; ++i) {
    auto a = block_norms(tr.states[i], spec, tr.times[i]);
    const double sr = spec.weight.modulation_rate(tr.times[i]) * std::log(2.0);
    for (std::size_t b = 0; b < B; ++b) logs[i][b] = safe_log(a[b]) + sr * layout.mod_index[b];
  }
  std::vector<std::vector<double>> out(T, std::vector<double>(B, kNegInf));
  for (std::size_t b = 0; b < B; ++b) {
    if (spec.gamma == kInf) {
      double run = kNegInf;
      for (std::size_t i = 0; i < T; ++i) {
        run = std::max(run, logs[i][b]);
        out[i][b] = run;
      }
      continue;
    }
    double mx = kNegInf;
    for (std::size_t i = 0; i < T; ++i) mx = std::max(mx, logs[i][b]);
    if (mx == kNegInf) continue;
    double acc = 0.0;
    for (std::size_t i = 1; i < T; ++i) {
      const double h = tr.times[i] - tr.times[i - 1];
      const double g0 = logs[i - 1][b] == kNegInf ? 0.0 : std::exp(spec.gamma * (logs[i - 1][b] - mx));
      const double g1 = logs[i][b] == kNegInf ? 0.0 : std::exp(spec.gamma * (logs[i][b] - mx));
      acc += 0.5 * h * (g0 + g1);
      out[i][b] = acc > 0.0 ? mx + std::log(acc) / spec.gamma : kNegInf;
    }
  }
  for (auto& row : out)
    for (std::size_t b = 0; b < B; ++b)
      if (row[b] != kNegInf) row[b] += layout.log_weight[b];
  return out;
}

}  // namespace

double besov_norm(const SpectralField& f, double s, double p, double q, const DyadicSystem& sys) {
  check_exponent(q, "q");
  auto a = dyadic_block_norms(f, sys, p);
  std::vector<double> logs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    logs[i] = safe_log(a[i]) + (sys.j_min + static_cast<int>(i)) * s * std::log(2.0);
  return finish(log_lq(logs, q));
}

double modulation_norm(const SpectralField& f, double s, double p, double q, const UniformSystem& sys) {
  check_exponent(q, "q");
  auto a = uniform_block_norms(f, sys, p);
  std::vector<double> logs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double k2 = 0.0;
    for (int d = 0; d < f.grid.n_dims; ++d) k2 += double(sys.blocks[i].k[d]) * sys.blocks[i].k[d];
    logs[i] = safe_log(a[i]) + 0.5 * s * std::log1p(k2);
  }
  return finish(log_lq(logs, q));
}

double exp_modulation_norm(const SpectralField& f, double s, double p, double q,
                           const UniformSystem& sys, bool l1_index) {
  check_exponent(q, "q");
  if (s < 0.0) fail(ErrorKind::InvalidParameter, "exp_modulation_norm: s must be >= 0");
  auto a = uniform_block_norms(f, sys, p);
  std::vector<double> logs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    logs[i] = safe_log(a[i]) + s * exp_index(sys.blocks[i].k, f.grid.n_dims, l1_index) * std::log(2.0);
  return finish(log_lq(logs, q));
}

double norm(const SpectralField& f, const NormSpec& spec, double t) {
  spec.validate();
  const Blocks layout = block_layout(f.grid, spec);
  auto a = block_norms(f, spec, t);
  const double sr = spec.weight.modulation_rate(t) * std::log(2.0);
  std::vector<double> logs(a.size());
  for (std::size_t b = 0; b < a.size(); ++b)
    logs[b] = safe_log(a[b]) + layout.log_weight[b] + sr * layout.mod_index[b];
  return finish(log_lq(logs, spec.q));
}

std::vector<double> cumulative_trace_norm(const EvolutionTrace& tr, const NormSpec& spec) {
  spec.validate();
  if (tr.empty()) fail(ErrorKind::InsufficientSamples, "trace norm of an empty trace");
  tr.validate();
  if (tr.size() == 1 && spec.gamma != kInf)
    fail(ErrorKind::InsufficientSamples, "single-sample trace with finite time exponent");
  const Blocks layout = block_layout(tr.grid(), spec);
  auto logs = prefix_block_logs(tr, spec, layout);
  std::vector<double> out(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) out[i] = finish(log_lq(logs[i], spec.q));
  return out;
}

double trace_norm(const EvolutionTrace& tr, const NormSpec& spec) {
  return cumulative_trace_norm(tr, spec).back();
}

double chemin_lerner_norm(const EvolutionTrace& tr, double gamma, double s, double p, double q,
                          const DyadicSystem& sys, const WeightSpec& weight) {
  if (!tr.empty() && sys.grid != tr.grid())
    fail(ErrorKind::InvalidParameter, "chemin_lerner_norm: system built for another grid");
  if (sys.smoothness != 0)
    fail(ErrorKind::InvalidParameter, "chemin_lerner_norm: only the default profile is cached");
  NormSpec spec;
  spec.family = Family::Besov;
  spec.s = s;
  spec.p = p;
  spec.q = q;
  spec.gamma = gamma;
  spec.weight = weight;
  return trace_norm(tr, spec);
}

double time_exp_modulation_norm(const EvolutionTrace& tr, const WeightSpec& s_of_t, double q_time,
                                double p, double q, const UniformSystem& sys, bool l1_index) {
  if (!tr.empty() && sys.grid != tr.grid())
    fail(ErrorKind::InvalidParameter, "time_exp_modulation_norm: system built for another grid");
  if (s_of_t.kind != WeightKind::ExpModulationRate && s_of_t.kind != WeightKind::None)
    fail(ErrorKind::InvalidParameter, "time_exp_modulation_norm: expects an exp_modulation_rate weight");
  NormSpec spec;
  spec.family = Family::ExpModulation;
  spec.s = 0.0;
  spec.p = p;
  spec.q = q;
  spec.gamma = q_time;
  spec.weight = s_of_t;
  spec.l1_index = l1_index;
  return trace_norm(tr, spec);
}

namespace {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

TraceNormAccumulator::TraceNormAccumulator(const NormSpec& spec, const Grid& g) : spec_(spec) {
  spec_.validate();
  const Blocks b = block_layout(g, spec_);
  log_weight_ = b.log_weight;
  mod_index_ = b.mod_index;
  acc_.assign(log_weight_.size(), kNegInf);
}

void TraceNormAccumulator::push(double t, const SpectralField& u) {
  if (count_ > 0 && !(t > t_prev_))
    fail(ErrorKind::InvalidParameter, "trace accumulator: times must be strictly increasing");
  auto a = block_norms(u, spec_, t);
  const double sr = spec_.weight.modulation_rate(t) * std::log(2.0);
  std::vector<double> cur(a.size());
  for (std::size_t b = 0; b < a.size(); ++b) cur[b] = safe_log(a[b]) + sr * mod_index_[b];
  if (spec_.gamma == kInf) {
    for (std::size_t b = 0; b < cur.size(); ++b) acc_[b] = std::max(acc_[b], cur[b]);
  } else if (count_ > 0) {
    const double lh = std::log(0.5 * (t - t_prev_));
    for (std::size_t b = 0; b < cur.size(); ++b) {
      const double term = log_add(spec_.gamma * prev_[b], spec_.gamma * cur[b]);
      if (term != kNegInf) acc_[b] = log_add(acc_[b], lh + term);
    }
  }
  prev_ = std::move(cur);
  t_prev_ = t;
  ++count_;
}

double TraceNormAccumulator::value() const {
  std::vector<double> logs(acc_.size(), kNegInf);
  for (std::size_t b = 0; b < acc_.size(); ++b) {
    if (acc_[b] == kNegInf) continue;
    logs[b] = (spec_.gamma == kInf ? acc_[b] : acc_[b] / spec_.gamma) + log_weight_[b];
  }
  return finish(log_lq(logs, spec_.q));
}

GevreyFit gevrey_membership(const SpectralField& f, double p, int max_order) {
  if (max_order < 1 || max_order > f.grid.N / 4)
    fail(ErrorKind::InvalidParameter, "gevrey_membership: max_order must lie in [1, N/4]");
  GevreyFit fit;
  for (int m = 0; m <= max_order; ++m) {
    const double v = lp_norm(derivative(f, 0, m), p);
    if (!std::isfinite(v) || v <= 0.0)
      fail(ErrorKind::Overflow, "gevrey_membership: derivative norm of order " +
                                    std::to_string(m) + " is not positive and finite");
    fit.y.push_back(std::log(v) - std::lgamma(m + 1.0));
  }
  const double n = fit.y.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t m = 0; m < fit.y.size(); ++m) {
    sx += m;
    sy += fit.y[m];
    sxx += double(m) * m;
    sxy += m * fit.y[m];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double r2 = 0.0;
  for (std::size_t m = 0; m < fit.y.size(); ++m) {
    const double e = fit.y[m] - (icpt + slope * m);
    r2 += e * e;
  }
  fit.rho = std::exp(-slope);
  fit.M = std::exp(icpt);
  fit.residual = std::sqrt(r2 / n);
  return fit;
}

nlohmann::json norm_report(const NormSpec& spec, const Grid& g, double value) {
  nlohmann::ordered_json j;
  j["family"] = to_string(spec.family);
  j["s"] = spec.s;
  j["p"] = exponent_json(spec.p);
  j["q"] = exponent_json(spec.q);
  j["gamma"] = exponent_json(spec.gamma);
  j["weight"] = spec.weight.to_json();
  j["value"] = value;
  nlohmann::ordered_json tr;
  if (spec.family == Family::Besov) {
    const auto& sys = dyadic_for(g);
    tr["j_min"] = sys.j_min;
    tr["j_max"] = sys.j_max;
  } else {
    tr["k_max"] = uniform_for(g).k_max;
  }
  j["truncation"] = tr;
  j["grid"] = {{"n", g.n_dims}, {"N", g.N}};
  j["domain"] = "periodic torus";
  return j;
}

}  // namespace gevrey
