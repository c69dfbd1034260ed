// Acceptance suite: one pass/fail line per criterion.
//   gevrey_acceptance            run all
//   gevrey_acceptance 3 7        run the listed criteria
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gevrey/analyticity.hpp"
#include "gevrey/datum.hpp"
#include "gevrey/digest.hpp"
#include "gevrey/estimates.hpp"
#include "gevrey/random_fields.hpp"
#include "gevrey/solver.hpp"
#include "gevrey/spectral_ops.hpp"
#include "gevrey_cli/cli.hpp"

using namespace gevrey;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  t.back() = hi;
  return t;
}

double max_abs_physical(const SpectralField& f) {
  double m = 0.0;
  for (int c = 0; c < f.components; ++c)
    for (const auto& z : inverse_complex(f, c)) m = std::max(m, std::abs(z));
  return m;
}

// 1. Dyadic and uniform reconstruction in the max norm.
Outcome decomposition_exactness() {
  struct Case { int n, N; };
  double worst_d = 0.0, worst_u = 0.0;
  for (Case c : {Case{2, 32}, Case{2, 64}, Case{2, 128}, Case{3, 32}}) {
    const Grid g{c.n, c.N};
    const auto& dsys = dyadic_for(g);
    const auto& usys = uniform_for(g);
    for (int s = 0; s < 20; ++s) {
      const SpectralField f = gaussian_spectrum(g, 1, 1.0, 1000 + s);
      const double scale = max_abs_physical(f);
      SpectralField d = mean_part(f);
      for (int j = dsys.j_min; j <= dsys.j_max; ++j) d += dyadic_block(f, j, dsys);
      worst_d = std::max(worst_d, max_abs_physical(d - f) / scale);
      // Sum of sigma_k-weighted pieces, accumulated from the block tables.
      SpectralField u(g, 1);
      for (const auto& b : usys.blocks)
        for (std::size_t i = 0; i < b.modes.size(); ++i)
          u.data[b.modes[i]] += b.weight[i] * f.data[b.modes[i]];
      worst_u = std::max(worst_u, max_abs_physical(u - f) / scale);
    }
    // The tables agree with the block operator itself.
    const SpectralField f = gaussian_spectrum(g, 1, 1.0, 999);
    for (const auto& b : {usys.blocks.front(), usys.blocks[usys.blocks.size() / 3], usys.blocks.back()}) {
      SpectralField t(g, 1);
      for (std::size_t i = 0; i < b.modes.size(); ++i) t.data[b.modes[i]] = b.weight[i] * f.data[b.modes[i]];
      worst_u = std::max(worst_u, max_abs_physical(uniform_block(f, b.k, usys) - t) / max_abs_physical(f));
    }
  }
  return {worst_d < 1e-12 && worst_u < 1e-12,
          "dyadic " + fmt(worst_d) + ", uniform " + fmt(worst_u) + " (relative max norm)"};
}

Outcome verify_ids(const std::vector<std::string>& ids, const EnsembleSpec& spec) {
  Outcome o{true, ""};
  for (const auto& id : ids) {
    const auto r = verify(id, spec);
    o.pass = o.pass && r.pass;
    o.detail += id + (r.pass ? "" : "[FAIL]") + " C=" + fmt(r.C_emp) + " drift=" + fmt(r.resolution_drift) + "; ";
  }
  return o;
}

// 2. Both Bernstein inequalities.
Outcome bernstein_sweep() {
  EnsembleSpec s;
  s.n_samples = 20;
  s.resolutions = {32, 64, 128};
  s.seed = 11;
  const auto r = verify("bernstein", s);
  // Shell spread is part of each case's pass flag; a violation is named in the diagnostic.
  return {r.pass, "C_emp=" + fmt(r.C_emp) + " drift=" + fmt(r.resolution_drift) + " cases=" +
                      std::to_string(r.cases.size()) + (r.diagnostic.empty() ? "" : " " + r.diagnostic)};
}

// 3. Block decay on dyadic shells and uniform cubes.
Outcome semigroup_block_decay() {
  const Grid g{2, 64};
  const auto& d = dyadic_for(g);
  const auto& u = uniform_for(g);
  double worst = 0.0;
  int checks = 0;
  for (double a : {0.5, 0.75, 1.0})
    for (double t : log_spaced(1e-3, 1.0, 10)) {
      for (int j = d.j_min + 1; j <= d.j_max - 1; ++j) {
        const auto b = block_decay_dyadic(j, t, a, d, 17 + j);
        worst = std::max(worst, b.measured / b.bound_rate);
        checks += b.ok() ? 0 : 1000000;
        ++checks;
      }
      for (std::array<int, 3> k : {std::array<int, 3>{1, 0, 0}, {3, -2, 0}, {8, 5, 0}, {0, 15, 0}}) {
        const auto b = block_decay_uniform(k, t, a, u, 23);
        worst = std::max(worst, b.measured / b.bound_rate);
        checks += b.ok() ? 0 : 1000000;
        ++checks;
      }
    }
  return {checks < 1000000, std::to_string(checks % 1000000) + " checks, max measured/bound " + fmt(worst)};
}

EnsembleSpec estimate_ensemble() {
  EnsembleSpec s;
  s.n_samples = 10;
  s.decay = 3.0;
  s.resolutions = {32, 64};
  s.seed = 1;
  s.alpha = 0.0;  // every alpha in {1, 3/4, 1/2}
  return s;
}

// 4. Weighted linear estimates.
Outcome weighted_linear() { return verify_ids({"semigroup_besov", "duhamel_besov"}, estimate_ensemble()); }

// 5. Bilinear estimates.
Outcome bilinear() {
  return verify_ids({"bilinear_besov", "bilinear_exp", "product_modulation", "paraproduct_infty"},
                    estimate_ensemble());
}

// 6. Gevrey membership separates analytic from polynomially decaying data.
// The order-m derivative of data decaying like e^{-r|xi|} peaks near |xi| = m/r,
// which must stay below the 2/3 cutoff N/3: N = 256 resolves m = 12 at r = ln2/4.
Outcome gevrey_equivalence() {
  const Grid g{2, 256};
  const int order = 12;
  bool ok = true;
  double worst_res = 0.0;
  // Exponential-modulation rate s <-> coefficient decay 2^{-s|k|} = e^{-s ln2 |k|}.
  std::vector<double> rho_by_s;
  for (double s : {0.25, 0.5, 1.0}) {
    double mean = 0.0;
    for (int k = 0; k < 5; ++k) {
      const auto fit = gevrey_membership(analytic_field(g, 1, s * std::log(2.0), 40 + k), 2.0, order);
      worst_res = std::max(worst_res, fit.residual);
      ok = ok && fit.residual < 0.2;
      mean += fit.rho / 5;
    }
    rho_by_s.push_back(mean);
  }
  const bool monotone = rho_by_s[0] < rho_by_s[1] && rho_by_s[1] < rho_by_s[2];
  const auto poly = gevrey_membership(gaussian_spectrum(g, 1, 3.0, 7), 2.0, order);
  // rho -> 0: for polynomial decay the fitted rho is set by the cutoff and shrinks under refinement.
  std::vector<double> poly_rho;
  for (int N : {128, 256, 512})
    poly_rho.push_back(gevrey_membership(gaussian_spectrum(Grid{2, N}, 1, 3.0, 7), 2.0, order).rho);
  const bool shrinking = poly_rho[1] < 0.7 * poly_rho[0] && poly_rho[2] < 0.7 * poly_rho[1];
  const bool separated = poly.residual > 0.5 || shrinking;
  return {ok && monotone && separated,
          "analytic residual<=" + fmt(worst_res) + ", rho(s)=" + fmt(rho_by_s[0]) + "," + fmt(rho_by_s[1]) +
              "," + fmt(rho_by_s[2]) + "; polynomial residual=" + fmt(poly.residual) + ", rho(N=128,256,512)=" +
              fmt(poly_rho[0]) + "," + fmt(poly_rho[1]) + "," + fmt(poly_rho[2])};
}

double rel_l2(const SpectralField& a, const SpectralField& b) { return std::sqrt(energy(a - b) / energy(b)); }

// 7. Taylor-Green regression.
Outcome taylor_green_regression() {
  const Grid g{2, 64};
  const SpectralField tg = taylor_green(g, 1.0);
  SolverConfig cfg = scheme_config(Scheme::Besov, 2);
  cfg.T = 1.0;
  cfg.dt = 1e-3;
  cfg.n_records = 10;
  const auto sr = step_solve(tg, cfg);
  double step_err = 0.0;
  for (std::size_t i = 0; i < sr.trace.size(); ++i)
    step_err = std::max(step_err, rel_l2(sr.trace.states[i], std::exp(-2 * sr.trace.times[i]) * tg));
  cfg.n_picard = 1;
  const auto pr = picard_solve(tg, cfg);
  double pic_err = 0.0;
  for (std::size_t i = 0; i < pr.final_trace.size(); ++i)
    pic_err = std::max(pic_err, rel_l2(pr.final_trace.states[i], std::exp(-2 * pr.final_trace.times[i]) * tg));
  return {step_err < 1e-6 && pic_err < 1e-6 && sr.energy_balance_defect < 1e-6,
          "step " + fmt(step_err) + ", picard " + fmt(pic_err) + ", energy balance " +
              fmt(sr.energy_balance_defect)};
}

// 8. Picard contraction at half the calibrated threshold.
Outcome contraction() {
  const Grid g{2, 64};
  Outcome o{true, ""};
  struct Run { Scheme scheme; double alpha; };
  for (Run r : {Run{Scheme::Besov, 1.0}, Run{Scheme::Modulation, 1.0}, Run{Scheme::Fractional, 0.75}}) {
    SolverConfig cfg = scheme_config(r.scheme, 2, 2.0, r.alpha, 0.1);
    cfg.T = 1.0;
    cfg.n_picard = 3;
    cfg.picard_tol = 0.0;
    const auto rec = calibrate(r.alpha, 2, g.N, cfg.smallness_space.family);
    cfg.calibrated_constant = rec.C;
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      DatumSpec d;
      d.kind = "random_div_free";
      d.decay = 3.0;
      d.seed = 100 + s;
      SpectralField u = init_data(g, d);
      const auto sm = smallness_check(u, cfg);
      u *= 0.5 * sm.threshold / sm.norm;
      const auto pr = picard_solve(u, cfg);
      // ratios[k] = d_{k+2} / d_{k+1}; iterate 3 is ratios[1]
      const double ratio = pr.contraction_ratios.size() >= 2 ? pr.contraction_ratios[1] : 0.0;
      worst = std::max(worst, ratio);
    }
    const bool ok = worst < 0.5;
    o.pass = o.pass && ok;
    o.detail += std::string(to_string(r.scheme)) + (ok ? "" : "[FAIL]") + " C=" + fmt(rec.C) +
                " worst ratio " + fmt(worst) + "; ";
  }
  return o;
}

// 9. Radius growth exponents and monitor boundedness.
Outcome radius_growth() {
  const Grid g{2, 64};
  Outcome o{true, ""};
  struct Run { Scheme scheme; double alpha, lo, hi; };
  const auto ts = log_spaced(0.05, 1.0, 8);
  for (Run r : {Run{Scheme::Besov, 1.0, 0.35, 0.65}, Run{Scheme::Half, 0.5, 0.75, 1.25},
                Run{Scheme::Fractional, 0.75, 0.5, 0.9}}) {
    SolverConfig cfg = scheme_config(r.scheme, 2, 2.0, r.alpha, 0.1);
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    DatumSpec d;
    d.kind = "random_div_free";
    d.decay = 0.0;
    d.amplitude = 0.05;
    d.seed = 3;
    const auto res = radius_growth_experiment(init_data(g, d), r.alpha, ts, cfg);
    const bool ok = res.exponent >= r.lo && res.exponent <= r.hi && !res.monitor.alarm_index;
    o.pass = o.pass && ok;
    o.detail += "alpha=" + fmt(r.alpha) + (ok ? "" : "[FAIL]") + " exponent " + fmt(res.exponent) +
                (res.monitor.alarm_index ? " alarm" : "") + "; ";
  }
  return o;
}

// 10. Scaling symmetry.
Outcome scaling() {
  const Grid g{2, 64};
  double worst = 0.0;
  for (double a : {1.0, 0.5}) {
    SolverConfig c = scheme_config(a == 1.0 ? Scheme::Besov : Scheme::Half, 2, 2.0, a);
    c.T = 0.25;
    c.dt = 1e-3;
    worst = std::max(worst, scaling_symmetry_check(taylor_green(g, 0.1), 2, c));
  }
  return {worst < 1e-4, "max discrepancy " + fmt(worst)};
}

std::map<std::string, std::string> tree_digest(const fs::path& dir) {
  std::map<std::string, std::string> d;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) d[fs::relative(e.path(), dir).string()] = sha256_file(e.path());
  return d;
}

int cli_run(const std::string& sub, const fs::path& cfg, const fs::path& out) {
  ::setenv("GEVREY_OUT", out.c_str(), 1);
  std::vector<std::string> args{"gevrey", sub, "--config", cfg.string(), "--quiet"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream sink;
  const int rc = cli::main(static_cast<int>(argv.size()), argv.data(), sink, sink);
  ::unsetenv("GEVREY_OUT");
  return rc;
}

// 11. Byte-identical reruns of every subcommand.
Outcome reproducibility() {
  const fs::path cfgs = GEVREY_CONFIG_DIR;
  const fs::path root = fs::path("acceptance_out") / "repro";
  fs::remove_all(root);
  Outcome o{true, ""};
  const std::vector<std::pair<std::string, std::string>> runs{
      {"solve", "solve_taylor_green.toml"}, {"picard", "picard_small.toml"}, {"norms", "norms.toml"},
      {"verify", "verify_bernstein.toml"},  {"radius", "radius_alpha1.toml"}};
  int files = 0;
  for (const auto& [sub, file] : runs) {
    const fs::path a = root / (sub + "_a"), b = root / (sub + "_b");
    const int ra = cli_run(sub, cfgs / file, a), rb = cli_run(sub, cfgs / file, b);
    const auto da = ra == 0 ? tree_digest(a) : decltype(tree_digest(a)){};
    const bool same = ra == 0 && rb == 0 && !da.empty() && da == tree_digest(b);
    files += static_cast<int>(da.size());
    o.pass = o.pass && same;
    if (!same) o.detail += sub + "[FAIL rc=" + std::to_string(ra) + "/" + std::to_string(rb) + "] ";
  }
  o.detail += std::to_string(runs.size()) + " subcommands, " + std::to_string(files) + " artifacts compared";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"decomposition_exactness", decomposition_exactness},
      {"bernstein_sweep", bernstein_sweep},
      {"semigroup_block_decay", semigroup_block_decay},
      {"weighted_linear_estimates", weighted_linear},
      {"bilinear_estimates", bilinear},
      {"gevrey_equivalence", gevrey_equivalence},
      {"taylor_green_regression", taylor_green_regression},
      {"picard_contraction", contraction},
      {"analyticity_growth_law", radius_growth},
      {"scaling_symmetry", scaling},
      {"cli_reproducibility", reproducibility},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);

  int failed = 0;
  for (int i : which) {
    if (i < 1 || i > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << i << "\n";
      return 2;
    }
    const auto& [name, fn] = criteria[i - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << i << " " << name << ": " << o.detail << " [" << fmt(sec)
              << " s]" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
