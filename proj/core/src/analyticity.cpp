#include "gevrey/analyticity.hpp"

#include <algorithm>
#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/io.hpp"

namespace gevrey {

std::vector<double> shell_amplitudes(const SpectralField& f) {
  const auto& L = lattice(f.grid);
  int rmax = 0;
  for (std::size_t m = 0; m < f.modes(); ++m)
    if (L.kept[m]) rmax = std::max(rmax, std::abs(L.k[m][0]) + std::abs(L.k[m][1]) + std::abs(L.k[m][2]));
  std::vector<double> a(rmax + 1, 0.0);
  for (std::size_t m = 0; m < f.modes(); ++m) {
    if (!L.kept[m]) continue;
    const int r = std::abs(L.k[m][0]) + std::abs(L.k[m][1]) + std::abs(L.k[m][2]);
    double v = 0.0;
    for (int c = 0; c < f.components; ++c) v += std::norm(f.at(c, m));
    a[r] = std::max(a[r], std::sqrt(v));
  }
  return a;
}

namespace {

struct Line {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  Line l;
  l.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  l.intercept = (sy - l.slope * sx) / n;
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (l.intercept + l.slope * x[i]);
    r2 += e * e;
  }
  l.residual = std::sqrt(r2 / n);
  return l;
}

}  // namespace

RadiusFit radius_fit(const SpectralField& f, const RadiusWindow& window) {
  if (!(window.rel_min > 0.0 && window.rel_min < window.rel_max && window.rel_max <= 1.0))
    fail(ErrorKind::InvalidParameter, "radius_fit: window must satisfy 0 < rel_min < rel_max <= 1");
  const auto a = shell_amplitudes(f);
  const double kap = f.grid.kappa();
  std::size_t peak_r = 0;
  for (std::size_t r = 1; r < a.size(); ++r)
    if (a[r] > a[peak_r]) peak_r = r;
  const double peak = a[peak_r];
  if (!(peak > 0.0)) fail(ErrorKind::UndefinedRadius, "radius_fit: field vanishes on the window");
  RadiusFit fit;
  auto select = [&](double hi) {
    std::vector<double> x, y;
    for (std::size_t r = std::max<std::size_t>(peak_r, 1); r < a.size(); ++r) {
      if (a[r] <= 0.0) continue;
      const double rel = a[r] / peak;
      if (rel >= window.rel_min && rel <= hi) {
        x.push_back(kap * r);
        y.push_back(std::log(a[r]));
      }
    }
    return std::make_pair(x, y);
  };
  auto [x, y] = select(window.rel_max);
  if (static_cast<int>(x.size()) < window.min_shells) {
    auto w = select(1.0);
    if (w.first.size() > x.size()) {
      x = std::move(w.first);
      y = std::move(w.second);
      fit.widened = true;
    }
  }
  if (x.size() < 2) fail(ErrorKind::UndefinedRadius, "radius_fit: fewer than two shells in the window");
  const Line l = least_squares(x, y);
  fit.radius = std::max(0.0, -l.slope);
  fit.fit_residual = l.residual;
  fit.window_min = x.front();
  fit.window_max = x.back();
  fit.shells = static_cast<int>(x.size());
  return fit;
}

MonitorResult gevrey_norm_monitor(const EvolutionTrace& tr, double alpha, double rate,
                                  const NormSpec& norm_spec) {
  check_alpha(alpha);
  if (!(rate >= 0.0)) fail(ErrorKind::InvalidParameter, "gevrey_norm_monitor: rate must be >= 0");
  NormSpec spec = norm_spec;
  if (rate > 0.0) {
    spec.weight = WeightSpec::for_alpha(alpha, rate);
    if (spec.noise_floor == 0.0) spec.noise_floor = kWeightNoiseFloor;
  }
  MonitorResult r;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    r.times.push_back(tr.times[i]);
    r.values.push_back(norm(tr.states[i], spec, tr.times[i]));
    if (!r.alarm_index && !r.values.empty() && r.values.back() > 2.0 * r.values.front())
      r.alarm_index = i;
  }
  return r;
}

GrowthResult radius_growth_experiment(const SpectralField& u0, double alpha,
                                      const std::vector<double>& t_list, const SolverConfig& cfg,
                                      const RadiusWindow& window) {
  check_alpha(alpha);
  if (t_list.size() < 2) fail(ErrorKind::InvalidParameter, "radius_growth_experiment: need at least two times");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0 && t_list[i] <= 1.0))
      fail(ErrorKind::InvalidParameter, "radius_growth_experiment: times must lie in (0, 1]");
    if (i && !(t_list[i] > t_list[i - 1]))
      fail(ErrorKind::InvalidParameter, "radius_growth_experiment: times must increase");
  }
  SolverConfig c = cfg;
  c.alpha = alpha;
  c.T = t_list.back();
  c.output_times = t_list;
  StepResult run = step_solve(u0, c);
  GrowthResult g;
  g.warnings = run.warnings;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    const double t = run.trace.times[i];
    if (std::find(t_list.begin(), t_list.end(), t) == t_list.end()) continue;
    try {
      RadiusFit f = radius_fit(run.trace.states[i], window);
      f.t = t;
      g.per_time.push_back(f);
      if (f.radius > 0.0) {
        lx.push_back(std::log(t));
        ly.push_back(std::log(f.radius));
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedRadius) throw;
      g.warnings.push_back("radius undefined at t = " + format_double(t) + "; later times dropped");
      break;
    }
  }
  if (lx.size() < 2) fail(ErrorKind::UndefinedRadius, "radius_growth_experiment: fewer than two fitted times");
  const auto l = least_squares(lx, ly);
  g.exponent = l.slope;
  g.prefactor = std::exp(l.intercept);
  g.monitor = gevrey_norm_monitor(run.trace, alpha, c.weight.is_lambda() ? c.weight.rate : 0.0,
                                  c.smallness_space);
  return g;
}

std::string radius_csv(const std::vector<RadiusFit>& fits) {
  std::string s = csv_row(std::vector<std::string>{"t", "radius", "residual", "window_min", "window_max"});
  for (const auto& f : fits) s += csv_row(std::vector<double>{f.t, f.radius, f.fit_residual, f.window_min, f.window_max});
  return s;
}

nlohmann::ordered_json growth_json(const GrowthResult& g, const std::string& config_digest) {
  nlohmann::ordered_json j;
  j["exponent"] = g.exponent;
  j["prefactor"] = g.prefactor;
  j["per_time"] = nlohmann::ordered_json::array();
  for (const auto& f : g.per_time)
    j["per_time"].push_back({{"t", f.t}, {"radius", f.radius}, {"residual", f.fit_residual},
                             {"window_min", f.window_min}, {"window_max", f.window_max},
                             {"shells", f.shells}, {"widened", f.widened}});
  j["monitor"] = {{"times", g.monitor.times}, {"values", g.monitor.values},
                  {"alarm", g.monitor.alarm_index.has_value()}};
  j["warnings"] = g.warnings;
  j["solver_config_digest"] = config_digest;
  return j;
}

}  // namespace gevrey
