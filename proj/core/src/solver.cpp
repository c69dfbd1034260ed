#include "gevrey/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "gevrey/error.hpp"
#include "gevrey/estimates.hpp"
#include "gevrey/io.hpp"
#include "gevrey/snapshot.hpp"
#include "gevrey/spectral_ops.hpp"

namespace gevrey {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Besov: return "besov";
    case Scheme::Modulation: return "modulation";
    case Scheme::Half: return "half";
    case Scheme::Fractional: return "fractional";
  }
  return "besov";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "besov") return Scheme::Besov;
  if (s == "modulation") return Scheme::Modulation;
  if (s == "half") return Scheme::Half;
  if (s == "fractional") return Scheme::Fractional;
  fail(ErrorKind::Validation, "solver.scheme: unknown value '" + s + "'");
}

NormSpec critical_space(int n_dims, double alpha, double p) {
  NormSpec s;
  s.family = Family::Besov;
  s.s = n_dims / p - 2.0 * alpha + 1.0;
  s.p = p;
  s.q = 1.0;
  return s;
}

namespace {

NormSpec besov_metric(double s, double p, double gamma, const WeightSpec& w, const std::string& name) {
  NormSpec n;
  n.family = Family::Besov;
  n.s = s;
  n.p = p;
  n.q = 1.0;
  n.gamma = gamma;
  n.weight = w;
  n.noise_floor = w.is_lambda() ? kWeightNoiseFloor : 0.0;
  n.name = name;
  return n;
}

}  // namespace

SolverConfig scheme_config(Scheme scheme, int n_dims, double p, double alpha, double eps) {
  SolverConfig c;
  const double np = n_dims / p;
  switch (scheme) {
    case Scheme::Besov: {
      c.alpha = 1.0;
      c.weight = WeightSpec::for_alpha(1.0, 1.0);
      c.continuation_norms = {besov_metric(np - 1.0 / 3.0, p, 3.0, c.weight, "besov_L3"),
                              besov_metric(np + 1.0 / 3.0, p, 1.5, c.weight, "besov_L3/2")};
      c.smallness_space = critical_space(n_dims, 1.0, p);
      break;
    }
    case Scheme::Modulation: {
      c.alpha = 1.0;
      c.weight.kind = WeightKind::ExpModulationRate;
      c.weight.rate = kModulationRate;
      NormSpec m;
      m.family = Family::ExpModulation;
      m.s = 0.0;
      m.p = p;
      m.q = 1.0;
      m.gamma = 2.0;
      m.weight = c.weight;
      m.name = "expmod_L2";
      c.continuation_norms = {m};
      c.smallness_space.family = Family::Modulation;
      c.smallness_space.s = -1.0;
      c.smallness_space.p = p;
      c.smallness_space.q = 1.0;
      break;
    }
    case Scheme::Half: {
      c.alpha = 0.5;
      c.weight.kind = WeightKind::ExpLinearT;
      c.weight.rate = 1.0 / (2.0 * n_dims);
      c.continuation_norms = {besov_metric(np, p, kInf, c.weight, "besov_Linf"),
                              besov_metric(np + 1.0, p, 1.0, c.weight, "besov_L1")};
      c.smallness_space = critical_space(n_dims, 0.5, p);
      break;
    }
    case Scheme::Fractional: {
      if (!(alpha > 0.5 && alpha < 1.0))
        fail(ErrorKind::Validation, "solver.alpha must lie in (1/2, 1) for the fractional scheme");
      if (!(eps > 0.0 && eps < 0.25 && eps < 2.0 * alpha - 1.0))
        fail(ErrorKind::Validation, "solver.gns_epsilon must lie in (0, min(1/4, 2 alpha - 1))");
      c.alpha = alpha;
      c.gns_epsilon = eps;
      c.weight = WeightSpec::for_alpha(alpha, 1.0);
      const double gp = 2.0 * alpha / (2.0 * alpha - 1.0 + eps);
      const double gm = 2.0 * alpha / (2.0 * alpha - 1.0 - eps);
      c.continuation_norms = {besov_metric(np + eps, p, gp, c.weight, "besov_gamma_plus"),
                              besov_metric(np - eps, p, gm, c.weight, "besov_gamma_minus")};
      c.smallness_space = critical_space(n_dims, alpha, p);
      break;
    }
  }
  return c;
}

void SolverConfig::validate() const {
  if (!(alpha >= 0.5 && alpha <= 1.0)) fail(ErrorKind::Validation, "solver.alpha must lie in [1/2, 1]");
  if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorKind::Validation, "solver.T must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::Validation, "solver.dt must be positive");
  if (n_picard < 1) fail(ErrorKind::Validation, "solver.n_picard must be >= 1");
  if (picard_time_samples < 3) fail(ErrorKind::Validation, "solver.picard_time_samples must be >= 3");
  if (!(delta > 0.0)) fail(ErrorKind::Validation, "solver.delta must be positive");
  if (!(gns_epsilon > 0.0 && gns_epsilon < 0.25))
    fail(ErrorKind::Validation, "solver.gns_epsilon must lie in (0, 1/4)");
  if (!(picard_tol >= 0.0)) fail(ErrorKind::Validation, "solver.picard_tol must be >= 0");
  if (n_records < 1) fail(ErrorKind::Validation, "solver.n_records must be >= 1");
  for (double t : output_times)
    if (!(t > 0.0 && t <= T)) fail(ErrorKind::Validation, "solver.output_times must lie in (0, T]");
  if (calibrated_constant && !(*calibrated_constant > 0.0))
    fail(ErrorKind::Validation, "solver.calibrated_constant must be positive");
  weight.validate();
  smallness_space.validate();
  for (const auto& n : continuation_norms) n.validate();
  for (const auto& n : diagnostic_norms) n.validate();
}

nlohmann::ordered_json SolverConfig::to_json() const {
  nlohmann::ordered_json j;
  j["alpha"] = alpha;
  j["T"] = T;
  j["dt"] = dt;
  j["n_picard"] = n_picard;
  j["picard_time_samples"] = picard_time_samples;
  j["smallness_space"] = smallness_space.to_json();
  j["delta"] = delta;
  j["weight"] = weight.to_json();
  j["gns_epsilon"] = gns_epsilon;
  j["continuation_norms"] = nlohmann::ordered_json::array();
  for (const auto& n : continuation_norms) j["continuation_norms"].push_back(nlohmann::ordered_json(n.to_json()));
  j["nonlinear"] = nonlinear;
  j["picard_tol"] = picard_tol;
  j["output_times"] = output_times;
  j["n_records"] = n_records;
  j["diagnostic_norms"] = nlohmann::ordered_json::array();
  for (const auto& n : diagnostic_norms) j["diagnostic_norms"].push_back(nlohmann::ordered_json(n.to_json()));
  if (calibrated_constant) j["calibrated_constant"] = *calibrated_constant;
  return j;
}

SolverConfig SolverConfig::from_json(const nlohmann::json& j, int n_dims) {
  SolverConfig c;
  if (j.contains("scheme")) {
    const double p = j.contains("p") ? exponent_from_json(j.at("p")) : 2.0;
    c = scheme_config(scheme_from_string(j.at("scheme").get<std::string>()), n_dims, p,
                      j.value("alpha", 0.75), j.value("gns_epsilon", 0.1));
  }
  c.alpha = j.value("alpha", c.alpha);
  c.T = j.value("T", c.T);
  c.dt = j.value("dt", c.dt);
  c.n_picard = j.value("n_picard", c.n_picard);
  c.picard_time_samples = j.value("picard_time_samples", c.picard_time_samples);
  if (j.contains("smallness_space")) c.smallness_space = NormSpec::from_json(j.at("smallness_space"));
  c.delta = j.value("delta", c.delta);
  if (j.contains("weight")) c.weight = WeightSpec::from_json(j.at("weight"));
  c.gns_epsilon = j.value("gns_epsilon", c.gns_epsilon);
  if (j.contains("continuation_norms")) {
    c.continuation_norms.clear();
    for (const auto& n : j.at("continuation_norms")) c.continuation_norms.push_back(NormSpec::from_json(n));
  }
  c.nonlinear = j.value("nonlinear", c.nonlinear);
  c.picard_tol = j.value("picard_tol", c.picard_tol);
  if (j.contains("output_times")) c.output_times = j.at("output_times").get<std::vector<double>>();
  c.n_records = j.value("n_records", c.n_records);
  if (j.contains("diagnostic_norms")) {
    c.diagnostic_norms.clear();
    for (const auto& n : j.at("diagnostic_norms")) c.diagnostic_norms.push_back(NormSpec::from_json(n));
  }
  if (j.contains("calibrated_constant")) c.calibrated_constant = j.at("calibrated_constant").get<double>();
  c.validate();
  return c;
}

std::vector<double> picard_time_grid(double T, int M) {
  if (M < 3) fail(ErrorKind::InvalidParameter, "picard_time_grid: need at least 3 points");
  const int n_geo = (M - 1) / 2;
  const int n_uni = M - 1 - n_geo;
  std::vector<double> t;
  auto geo = geometric_time_grid(T, n_geo + 1);
  t.insert(t.end(), geo.begin(), geo.end());
  for (int i = 1; i <= n_uni; ++i) t.push_back(T * i / n_uni);
  std::sort(t.begin(), t.end());
  // Merge coincident points (T appears twice), then top up with midpoints of
  // the widest gaps so the count stays M.
  std::vector<double> u;
  for (double v : t)
    if (u.empty() || v - u.back() > 1e-14 * T) u.push_back(v);
  while (static_cast<int>(u.size()) < M) {
    std::size_t w = 1;
    for (std::size_t i = 2; i < u.size(); ++i)
      if (u[i] - u[i - 1] > u[w] - u[w - 1]) w = i;
    u.insert(u.begin() + w, 0.5 * (u[w] + u[w - 1]));
  }
  return u;
}

namespace {

// Lambda weights are applied state by state with the round-off floor of each
// state, then the difference is measured without weight. Block-level weights
// (2^{s(t)|k|}) are linear and stay in the norm.
EvolutionTrace prepare(const EvolutionTrace& tr, const NormSpec& spec) {
  if (!spec.weight.is_lambda()) return tr;
  EvolutionTrace w;
  for (std::size_t i = 0; i < tr.size(); ++i)
    w.push(tr.times[i], apply_lambda_weight(tr.states[i], spec.weight.theta(tr.times[i]), spec.noise_floor));
  return w;
}

NormSpec stripped(const NormSpec& spec) {
  if (!spec.weight.is_lambda()) return spec;
  NormSpec s = spec;
  s.weight = WeightSpec::none();
  s.noise_floor = 0.0;
  return s;
}

EvolutionTrace difference(const EvolutionTrace& a, const EvolutionTrace& b) {
  EvolutionTrace d;
  for (std::size_t i = 0; i < a.size(); ++i) d.push(a.times[i], a.states[i] - b.states[i]);
  return d;
}

void check_state(const SpectralField& u, const char* where) {
  if (u.components != u.grid.n_dims)
    fail(ErrorKind::InvalidParameter, std::string(where) + ": u0 must be a vector field");
  if (divergence_defect(u) > 1e-10)
    fail(ErrorKind::InvalidParameter, std::string(where) + ": u0 must be divergence-free");
  const double mx = max_coefficient(u);
  for (int c = 0; c < u.components; ++c)
    if (std::abs(u.at(c, 0)) > 1e-14 * std::max(mx, 1e-300))
      fail(ErrorKind::InvalidParameter, std::string(where) + ": u0 must have zero mean");
}

bool all_finite(const SpectralField& u) {
  for (const auto& c : u.data)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// Overflow inside the pseudo-spectral product surfaces as a rejected transform
// input; for an evolving state that is a blow-up, not a bad argument.
SpectralField checked_nonlinear(const SpectralField& u, const char* where, double t) {
  if (!all_finite(u)) fail(ErrorKind::Unstable, std::string(where) + ": non-finite state at t = " + format_double(t));
  try {
    return nonlinear_term(u);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RejectedInput) throw;
    fail(ErrorKind::Unstable, std::string(where) + ": overflow in the nonlinear term at t = " + format_double(t));
  }
}

}  // namespace

double metric_distance(const EvolutionTrace& a, const EvolutionTrace& b,
                       const std::vector<NormSpec>& metric) {
  if (a.size() != b.size()) fail(ErrorKind::InvalidParameter, "metric_distance: trace lengths differ");
  double d = 0.0;
  for (const auto& spec : metric)
    d = std::max(d, trace_norm(difference(prepare(a, spec), prepare(b, spec)), stripped(spec)));
  return d;
}

double metric_norm(const EvolutionTrace& a, const std::vector<NormSpec>& metric) {
  double d = 0.0;
  for (const auto& spec : metric) d = std::max(d, trace_norm(prepare(a, spec), stripped(spec)));
  return d;
}

nlohmann::ordered_json PicardReport::to_json() const {
  nlohmann::ordered_json j;
  j["iterate_distances"] = iterate_distances;
  j["contraction_ratios"] = contraction_ratios;
  j["converged"] = converged;
  j["diverged"] = diverged;
  j["final_norm"] = final_norm;
  j["iterations"] = iterate_distances.size();
  j["time_samples"] = final_trace.size();
  return j;
}

PicardReport picard_interval(const SpectralField& u_start, double t0, double length,
                             const SolverConfig& cfg, const EvolutionTrace* initial_guess) {
  cfg.validate();
  check_state(u_start, "picard_solve");
  if (!(length > 0.0)) fail(ErrorKind::InvalidParameter, "picard_solve: interval length must be positive");
  const auto rel = picard_time_grid(length, cfg.picard_time_samples);
  EvolutionTrace free;
  for (double r : rel) {
    SpectralField s = apply_semigroup(u_start, r, cfg.alpha);
    s.divergence_free = true;
    free.push(t0 + r, std::move(s));
  }
  EvolutionTrace current = free;
  if (initial_guess) {
    if (initial_guess->size() != free.size() || initial_guess->grid() != u_start.grid)
      fail(ErrorKind::InvalidParameter, "picard_solve: initial guess does not match the time grid");
    for (std::size_t i = 0; i < free.size(); ++i)
      if (std::abs(initial_guess->times[i] - free.times[i]) > 1e-12 * (1.0 + std::abs(free.times[i])))
        fail(ErrorKind::InvalidParameter, "picard_solve: initial guess does not match the time grid");
    current = *initial_guess;
    current.times = free.times;
  }
  const auto& metric = cfg.continuation_norms;
  PicardReport rep;
  int increases = 0;
  for (int m = 0; m < cfg.n_picard; ++m) {
    EvolutionTrace forcing;
    for (std::size_t i = 0; i < current.size(); ++i) {
      SpectralField f = cfg.nonlinear ? checked_nonlinear(current.states[i], "picard_solve", current.times[i])
                                      : SpectralField(u_start.grid, u_start.components);
      f *= -1.0;
      f.divergence_free = true;
      forcing.push(rel[i], std::move(f));
    }
    auto duh = duhamel_trace(forcing, cfg.alpha);
    EvolutionTrace next;
    for (std::size_t i = 0; i < free.size(); ++i) {
      SpectralField s = free.states[i] + duh[i];
      if (!all_finite(s)) fail(ErrorKind::Unstable, "picard_solve: non-finite iterate");
      s.divergence_free = true;
      next.push(free.times[i], std::move(s));
    }
    const double d = metric.empty() ? 0.0 : metric_distance(current, next, metric);
    if (!std::isfinite(d)) fail(ErrorKind::Unstable, "picard_solve: non-finite iterate distance");
    if (!rep.iterate_distances.empty()) {
      const double prev = rep.iterate_distances.back();
      rep.contraction_ratios.push_back(prev > 0.0 ? d / prev : 0.0);
      increases = d > prev ? increases + 1 : 0;
    }
    rep.iterate_distances.push_back(d);
    current = std::move(next);
    const double nrm = metric.empty() ? 0.0 : metric_norm(current, metric);
    if (d <= cfg.picard_tol * nrm || d == 0.0) {
      rep.converged = true;
      break;
    }
    if (increases >= 3) {
      rep.diverged = true;
      break;
    }
  }
  rep.final_norm = metric.empty() ? 0.0 : metric_norm(current, metric);
  rep.final_trace = std::move(current);
  return rep;
}

PicardReport picard_solve(const SpectralField& u0, const SolverConfig& cfg,
                          const EvolutionTrace* initial_guess) {
  return picard_interval(u0, 0.0, cfg.T, cfg, initial_guess);
}

namespace {

struct EtdTables {
  std::vector<double> decay, w1, w2;
};

EtdTables etd_tables(const std::vector<double>& lam, double h) {
  EtdTables t;
  t.decay.resize(lam.size());
  t.w1.resize(lam.size());
  t.w2.resize(lam.size());
  for (std::size_t m = 0; m < lam.size(); ++m) {
    const double z = lam[m] * h;
    t.decay[m] = std::exp(-z);
    t.w1[m] = h * phi1(z);
    t.w2[m] = h * phi2(z);
  }
  return t;
}

double log_mean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.5 * (a + b);
  const double r = b / a;
  if (std::abs(r - 1.0) < 1e-6) return 0.5 * (a + b);
  return (a - b) / std::log(a / b);
}

std::vector<double> record_times(const SolverConfig& cfg) {
  std::vector<double> t{0.0};
  if (!cfg.output_times.empty()) {
    t.insert(t.end(), cfg.output_times.begin(), cfg.output_times.end());
  } else {
    for (int i = 1; i <= cfg.n_records; ++i) t.push_back(cfg.T * i / cfg.n_records);
  }
  t.push_back(cfg.T);
  std::sort(t.begin(), t.end());
  std::vector<double> u;
  for (double v : t)
    if (u.empty() || v - u.back() > 1e-14 * cfg.T) u.push_back(v);
  return u;
}

NormSpec gevrey_spec(const SolverConfig& cfg) {
  NormSpec g = cfg.smallness_space;
  g.weight = cfg.weight;
  g.noise_floor = cfg.weight.is_lambda() ? kWeightNoiseFloor : 0.0;
  g.name = "gevrey_norm";
  return g;
}

}  // namespace

std::vector<std::string> diagnostics_columns(const SolverConfig& cfg) {
  std::vector<std::string> c{"t", "energy"};
  for (const auto& n : cfg.diagnostic_norms) c.push_back(n.label());
  c.push_back("gevrey_norm");
  c.push_back("continuation_functional");
  return c;
}

StepResult step_solve(const SpectralField& u0, const SolverConfig& cfg) {
  cfg.validate();
  check_state(u0, "step_solve");
  const Grid& g = u0.grid;
  const auto& L = lattice(g);
  const auto lam = dissipation_symbol(g, cfg.alpha);
  const double vol = g.volume();
  const NormSpec gspec = gevrey_spec(cfg);
  std::vector<TraceNormAccumulator> cont;
  for (const auto& n : cfg.continuation_norms) cont.emplace_back(n, g);

  StepResult res;
  bool cfl_warned = false;
  SpectralField u = u0;
  u.divergence_free = true;
  const double E0 = energy(u0);
  double dissipated = 0.0;
  double t = 0.0;

  auto record = [&](double time) {
    std::map<std::string, double> d;
    const double E = energy(u);
    d["energy"] = E;
    d["dissipated"] = dissipated;
    d["balance_defect"] = E0 > 0.0 ? (E + dissipated - E0) / E0 : 0.0;
    for (const auto& n : cfg.diagnostic_norms) d[n.label()] = norm(u, n, time);
    d["gevrey_norm"] = norm(u, gspec, time);
    double cf = 0.0;
    for (const auto& a : cont) cf = std::max(cf, a.value());
    d["continuation_functional"] = cf;
    res.energy_balance_defect = std::max(res.energy_balance_defect, std::abs(d["balance_defect"]));
    res.trace.push(time, u);
    res.trace.diagnostics.back() = std::move(d);
  };

  for (auto& a : cont) a.push(0.0, u);
  record(0.0);
  const auto rec = record_times(cfg);
  std::map<double, EtdTables> tables;
  for (std::size_t seg = 1; seg < rec.size(); ++seg) {
    const double span = rec[seg] - rec[seg - 1];
    const int steps = std::max(1, static_cast<int>(std::ceil(span / cfg.dt - 1e-9)));
    const double h = span / steps;
    auto it = tables.find(h);
    if (it == tables.end()) it = tables.emplace(h, etd_tables(lam, h)).first;
    const EtdTables& tb = it->second;
    for (int s = 0; s < steps; ++s) {
      SpectralField n0 = cfg.nonlinear ? checked_nonlinear(u, "step_solve", t) : SpectralField(g, u.components);
      SpectralField a(g, u.components);
      for (int c = 0; c < u.components; ++c)
        for (std::size_t m = 0; m < g.size(); ++m)
          a.at(c, m) = tb.decay[m] * u.at(c, m) - tb.w1[m] * n0.at(c, m);
      SpectralField next = a;
      if (cfg.nonlinear) {
        SpectralField n1 = checked_nonlinear(a, "step_solve", t + h);
        for (int c = 0; c < u.components; ++c)
          for (std::size_t m = 0; m < g.size(); ++m)
            next.at(c, m) -= tb.w2[m] * (n1.at(c, m) - n0.at(c, m));
      }
      // Per-mode dissipation with log-linear interpolation of the modal energy
      // (exact for pure decay).
      double dis = 0.0;
      for (std::size_t m = 1; m < g.size(); ++m) {
        if (L.nyquist[m]) continue;
        double ea = 0.0, eb = 0.0;
        for (int c = 0; c < u.components; ++c) {
          ea += std::norm(u.at(c, m));
          eb += std::norm(next.at(c, m));
        }
        dis += lam[m] * log_mean(ea, eb);
      }
      dissipated += 2.0 * vol * h * dis;
      u = std::move(next);
      u.divergence_free = true;
      t = rec[seg - 1] + (s + 1) * h;
      if (!all_finite(u) || !std::isfinite(dissipated))
        fail(ErrorKind::Unstable, "step_solve: non-finite state at t = " + format_double(t));
      if (!cfl_warned && cfg.nonlinear) {
        const double umax = lp_norm(u, kInf);
        if (umax * h * g.N > 0.5) {
          res.warnings.push_back("stability: |u|_inf dt N = " + format_double(umax * h * g.N) +
                                 " exceeds 0.5 at t = " + format_double(t));
          cfl_warned = true;
        }
      }
      const double ts = s + 1 == steps ? rec[seg] : t;
      for (auto& acc : cont) acc.push(ts, u);
    }
    record(rec[seg]);
  }
  return res;
}

Smallness smallness_check(const SpectralField& u0, const SolverConfig& cfg) {
  cfg.validate();
  double C = 0.0;
  if (cfg.calibrated_constant) {
    C = *cfg.calibrated_constant;
  } else {
    C = calibrate(cfg.alpha, u0.grid.n_dims, u0.grid.N, cfg.smallness_space.family).C;
  }
  Smallness s;
  s.norm = norm(u0, cfg.smallness_space);
  s.threshold = cfg.delta / (4.0 * C);
  s.pass = s.norm <= s.threshold;
  return s;
}

std::vector<double> continuation_profile(const EvolutionTrace& tr, const SolverConfig& cfg) {
  if (tr.empty()) fail(ErrorKind::InsufficientSamples, "continuation_functional: empty trace");
  tr.validate();
  std::vector<TraceNormAccumulator> acc;
  for (const auto& n : cfg.continuation_norms) acc.emplace_back(n, tr.grid());
  std::vector<double> out;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    double v = 0.0;
    for (auto& a : acc) {
      a.push(tr.times[i], tr.states[i]);
      v = std::max(v, a.value());
    }
    out.push_back(v);
  }
  return out;
}

double continuation_functional(const EvolutionTrace& tr, const SolverConfig& cfg) {
  return continuation_profile(tr, cfg).back();
}

double scaling_symmetry_check(const SpectralField& u0, int lambda, const SolverConfig& cfg) {
  if (lambda < 1) fail(ErrorKind::InvalidParameter, "scaling_symmetry_check: lambda must be a positive integer");
  const Grid& g = u0.grid;
  const auto& L = lattice(g);
  const double floor = 1e-14 * max_coefficient(u0);
  int kmax = 0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    double a = 0.0;
    for (int c = 0; c < u0.components; ++c) a = std::max(a, std::abs(u0.at(c, m)));
    if (a <= floor) continue;
    for (int d = 0; d < g.n_dims; ++d) kmax = std::max(kmax, std::abs(L.k[m][d]));
  }
  if (lambda * kmax >= g.N / 2)
    fail(ErrorKind::InvalidParameter, "scaling_symmetry_check: lambda * max active frequency reaches N/2");

  const double amp = std::pow(double(lambda), 2.0 * cfg.alpha - 1.0);
  const double tscale = std::pow(double(lambda), 2.0 * cfg.alpha);
  auto dilate = [&](const SpectralField& f) {
    SpectralField out(g, f.components);
    for (std::size_t m = 0; m < g.size(); ++m) {
      double a = 0.0;
      for (int c = 0; c < f.components; ++c) a = std::max(a, std::abs(f.at(c, m)));
      if (a == 0.0) continue;
      std::array<int, 3> k = L.k[m];
      bool inside = true;
      for (int d = 0; d < g.n_dims; ++d) {
        k[d] *= lambda;
        inside = inside && std::abs(k[d]) < g.N / 2;
      }
      if (!inside) continue;
      const std::size_t mm = g.flat(k);
      for (int c = 0; c < f.components; ++c) out.at(c, mm) = amp * f.at(c, m);
    }
    out.divergence_free = f.divergence_free;
    return out;
  };

  SolverConfig base = cfg;
  base.weight = WeightSpec::none();
  base.diagnostic_norms.clear();
  base.continuation_norms.clear();
  base.output_times.clear();
  base.n_records = 1;
  SolverConfig orig = base;
  orig.T = base.T * tscale;
  orig.dt = base.dt * tscale;

  const SpectralField us = step_solve(dilate(u0), base).trace.states.back();
  const SpectralField uo = dilate(step_solve(u0, orig).trace.states.back());
  const double ref = std::sqrt(energy(us));
  const double diff = std::sqrt(energy(us - uo));
  return ref > 0.0 ? diff / ref : diff;
}

std::vector<RestartInterval> restart_schedule(const SpectralField& u0, const SolverConfig& cfg,
                                              const std::vector<double>& breakpoints, double C) {
  if (!(C > 0.0)) fail(ErrorKind::InvalidParameter, "restart_schedule: C must be positive");
  std::vector<double> bp = breakpoints;
  if (bp.empty() || bp.back() < cfg.T) bp.push_back(cfg.T);
  double c_rate = kModulationRate;
  for (const auto& n : cfg.continuation_norms)
    if (n.weight.kind == WeightKind::ExpModulationRate) c_rate = n.weight.rate;
  std::vector<RestartInterval> out;
  SpectralField start = u0;
  double t_prev = 0.0;
  for (std::size_t m = 0; m < bp.size(); ++m) {
    if (!(bp[m] > t_prev)) fail(ErrorKind::InvalidParameter, "restart_schedule: breakpoints must increase");
    RestartInterval iv;
    iv.t_start = t_prev;
    iv.t_end = bp[m];
    iv.delta = m == 0 ? 1.0 / (4.0 * C)
                      : 1.0 / (4.0 * C * std::pow(2.0, 4.0 * c_rate * std::max(2.0, iv.t_end)));
    iv.picard = picard_interval(start, t_prev, iv.t_end - t_prev, cfg);
    EvolutionTrace free;
    for (double t : iv.picard.final_trace.times) free.push(t, apply_semigroup(start, t - t_prev, cfg.alpha));
    iv.linear_norm = metric_norm(free, cfg.continuation_norms);
    iv.solution_norm = iv.picard.final_norm;
    iv.in_ball = iv.solution_norm <= iv.delta;
    start = iv.picard.final_trace.states.back();
    t_prev = iv.t_end;
    out.push_back(std::move(iv));
  }
  return out;
}

std::vector<std::filesystem::path> persist_solve(const std::filesystem::path& dir,
                                                 const SolverConfig& cfg,
                                                 const EvolutionTrace& tr) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  write_json(dir / "config.json", cfg.to_json());
  files.push_back(dir / "config.json");
  const auto cols = diagnostics_columns(cfg);
  std::string csv = csv_row(cols);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "state_%04zu", i);
    auto [h, b] = write_snapshot(tr.states[i], dir / stem);
    files.push_back(h);
    files.push_back(b);
    std::vector<double> row{tr.times[i]};
    const auto& d = tr.diagnostics[i];
    for (std::size_t c = 1; c < cols.size(); ++c) {
      auto it = d.find(cols[c]);
      row.push_back(it == d.end() ? std::nan("") : it->second);
    }
    csv += csv_row(row);
  }
  write_text(dir / "diagnostics.csv", csv);
  files.push_back(dir / "diagnostics.csv");
  return files;
}

}  // namespace gevrey
