#include "gevrey_cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <toml.hpp>

#include "gevrey/digest.hpp"
#include "gevrey/error.hpp"
#include "gevrey/io.hpp"
#include "gevrey/snapshot.hpp"
#include "gevrey/version.hpp"

namespace gevrey::cli {

namespace {

const std::set<std::string> kCommands{"solve", "picard", "norms", "verify", "radius"};

nlohmann::json node_to_json(const toml::node& n) {
  if (auto t = n.as_table()) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [k, v] : *t) o[std::string(k.str())] = node_to_json(v);
    return o;
  }
  if (auto a = n.as_array()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : *a) arr.push_back(node_to_json(v));
    return arr;
  }
  if (auto v = n.as_string()) return v->get();
  if (auto v = n.as_integer()) return v->get();
  if (auto v = n.as_floating_point()) {
    const double d = v->get();
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    return d;
  }
  if (auto v = n.as_boolean()) return v->get();
  fail(ErrorKind::Validation, "config: unsupported value type (dates and times are not accepted)");
}

// Runs `fn`, turning JSON type errors and unprefixed messages into validation
// errors that name the section.
template <class F>
auto section(const std::string& key, F&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, key + ": " + e.what());
  } catch (const Error& e) {
    const std::string msg = e.what();
    if (e.kind() == ErrorKind::Validation && msg.rfind(key, 0) == 0) throw;
    fail(ErrorKind::Validation, key + ": " + msg);
  }
}

// Typos in a section would otherwise fall back to defaults silently.
void check_keys(const std::string& where, const nlohmann::json& j, const std::set<std::string>& known) {
  if (!j.is_object()) fail(ErrorKind::Validation, where + ": expected a table");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) fail(ErrorKind::Validation, where + "." + k + ": unknown config key");
}

const std::set<std::string> kNormKeys{"family", "s", "p", "q", "gamma", "weight", "l1_index", "noise_floor", "name"};

Grid grid_from_json(const nlohmann::json& j) {
  check_keys("grid", j, {"n_dims", "N", "period"});
  Grid g;
  g.n_dims = j.value("n_dims", g.n_dims);
  g.N = j.value("N", g.N);
  g.period = j.value("period", g.period);
  g.validate();
  return g;
}

nlohmann::ordered_json grid_json(const Grid& g) {
  nlohmann::ordered_json j;
  j["n_dims"] = g.n_dims;
  j["N"] = g.N;
  j["period"] = g.period;
  return j;
}

std::filesystem::path out_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("GEVREY_OUT"); env && *env) return env;
  return cfg.output_dir;
}

class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(ErrorKind::Io, "output_dir: cannot create " + dir_.string() + ": " + ec.message());
  }
  const std::filesystem::path& dir() const { return dir_; }
  void json(const std::string& name, const nlohmann::ordered_json& j) {
    write_json(dir_ / name, j);
    files_.push_back(dir_ / name);
  }
  void text(const std::string& name, const std::string& t) {
    write_text(dir_ / name, t);
    files_.push_back(dir_ / name);
  }
  void add(const std::vector<std::filesystem::path>& fs) { files_.insert(files_.end(), fs.begin(), fs.end()); }
  void snapshot(const SpectralField& f, const std::string& stem) {
    auto [h, b] = write_snapshot(f, dir_ / stem);
    files_.push_back(h);
    files_.push_back(b);
  }
  std::vector<std::filesystem::path> finish(const ExperimentConfig& cfg) {
    nlohmann::ordered_json m;
    m["library"] = "gevrey";
    m["version"] = kVersion;
    m["command"] = cfg.command;
    m["config"] = cfg.to_json();
    auto list = nlohmann::ordered_json::array();
    for (const auto& f : files_) {
      nlohmann::ordered_json e;
      e["path"] = std::filesystem::relative(f, dir_).generic_string();
      e["sha256"] = sha256_file(f);
      list.push_back(e);
    }
    m["files"] = list;
    write_json(dir_ / "manifest.json", m);
    auto out = files_;
    out.push_back(dir_ / "manifest.json");
    return out;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

void run_solve(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const SpectralField u0 = init_data(cfg.grid, cfg.datum);
  const StepResult r = step_solve(u0, cfg.solver);
  art.add(persist_solve(art.dir(), cfg.solver, r.trace));
  nlohmann::ordered_json rep;
  rep["energy_balance_defect"] = r.energy_balance_defect;
  rep["records"] = r.trace.size();
  rep["warnings"] = r.warnings;
  art.json("solve_report.json", rep);
  log << "solve: " << r.trace.size() << " records, energy balance defect "
      << format_double(r.energy_balance_defect) << "\n";
  for (const auto& w : r.warnings) log << "warning: " << w << "\n";
}

void run_picard(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const SpectralField u0 = init_data(cfg.grid, cfg.datum);
  const PicardReport r = picard_solve(u0, cfg.solver);
  auto j = r.to_json();
  if (cfg.solver.calibrated_constant) {
    const Smallness s = smallness_check(u0, cfg.solver);
    nlohmann::ordered_json sj;
    sj["norm"] = s.norm;
    sj["threshold"] = s.threshold;
    sj["pass"] = s.pass;
    j["smallness"] = sj;
  }
  art.json("picard_report.json", j);
  art.snapshot(r.final_trace.states.back(), "final_state");
  log << "picard: " << r.iterate_distances.size() << " iterates, "
      << (r.converged ? "converged" : r.diverged ? "diverged" : "not converged") << "\n";
}

void run_norms(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const SpectralField u0 = init_data(cfg.grid, cfg.datum);
  auto arr = nlohmann::ordered_json::array();
  std::set<double> ps;
  for (const auto& n : cfg.norms) {
    const double v = norm(u0, n);
    nlohmann::ordered_json e;
    e["label"] = n.label();
    const nlohmann::json rep = norm_report(n, cfg.grid, v);
    for (const auto& [k, val] : rep.items()) e[k] = val;
    arr.push_back(e);
    if (n.family == Family::Besov) ps.insert(n.p);
    log << n.label() << " = " << format_double(v) << "\n";
  }
  art.json("norms.json", arr);
  if (ps.empty()) ps.insert(2.0);
  const auto& sys = dyadic_for(cfg.grid);
  std::vector<std::string> head{"index"};
  std::vector<std::vector<double>> cols;
  for (double p : ps) {
    head.push_back("p" + format_double(p));
    cols.push_back(dyadic_block_norms(u0, sys, p));
  }
  std::string csv = csv_row(head);
  for (int j = sys.j_min; j <= sys.j_max; ++j) {
    std::vector<double> row{static_cast<double>(j)};
    for (const auto& c : cols) row.push_back(c[j - sys.j_min]);
    csv += csv_row(row);
  }
  art.text("blocks.csv", csv);
}

void run_verify(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const auto ids = cfg.ids.empty() ? inequality_ids() : cfg.ids;
  std::vector<std::string> head{"id"};
  for (int N : cfg.ensemble.resolutions) head.push_back("C_emp_N" + std::to_string(N));
  head.push_back("C_emp");
  head.push_back("drift");
  head.push_back("pass");
  std::string csv = csv_row(head);
  for (const auto& id : ids) {
    const VerificationReport r = verify(id, cfg.ensemble);
    art.json("report_" + id + ".json", r.to_json());
    std::vector<std::string> row{id};
    for (int N : cfg.ensemble.resolutions) {
      auto it = r.C_by_resolution.find(N);
      row.push_back(format_double(it == r.C_by_resolution.end() ? std::nan("") : it->second));
    }
    row.push_back(format_double(r.C_emp));
    row.push_back(format_double(r.resolution_drift));
    row.push_back(r.pass ? "true" : "false");
    csv += csv_row(row);
    log << id << ": C_emp " << format_double(r.C_emp) << ", drift " << format_double(r.resolution_drift)
        << (r.pass ? ", pass" : ", FAIL") << "\n";
  }
  art.text("summary.csv", csv);
}

void run_radius(const ExperimentConfig& cfg, Artifacts& art, std::ostream& log) {
  const SpectralField u0 = init_data(cfg.grid, cfg.datum);
  const GrowthResult g = radius_growth_experiment(u0, cfg.solver.alpha, cfg.t_list, cfg.solver, cfg.window);
  art.text("radius_report.csv", radius_csv(g.per_time));
  art.json("growth_report.json", growth_json(g, sha256_hex(cfg.solver.to_json().dump())));
  log << "radius: exponent " << format_double(g.exponent) << " (target " << format_double(0.5 / cfg.solver.alpha)
      << ")" << (g.monitor.alarm_index ? ", monitor alarm" : "") << "\n";
  for (const auto& w : g.warnings) log << "warning: " << w << "\n";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!kCommands.count(command))
    fail(ErrorKind::Validation, "command: expected one of solve, picard, norms, verify, radius");
  grid.validate();
  if (command == "verify") {
    ensemble.validate();
    const auto& known = inequality_ids();
    for (const auto& id : ids)
      if (std::find(known.begin(), known.end(), id) == known.end())
        fail(ErrorKind::Validation, "ensemble.ids: unknown inequality id '" + id + "'");
  } else {
    datum.validate(grid);
    solver.validate();
  }
  if (command == "norms" && norms.empty()) fail(ErrorKind::Validation, "norms: at least one [[norms]] entry");
  if (command == "radius") {
    if (t_list.empty()) fail(ErrorKind::Validation, "radius.t_list must not be empty");
    for (std::size_t i = 0; i < t_list.size(); ++i)
      if (!(t_list[i] > 0.0 && t_list[i] <= 1.0) || (i > 0 && !(t_list[i] > t_list[i - 1])))
        fail(ErrorKind::Validation, "radius.t_list must be increasing within (0, 1]");
  }
  if (output_dir.empty()) fail(ErrorKind::Validation, "output_dir must not be empty");
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = seed;
  j["output_dir"] = output_dir.generic_string();
  j["grid"] = grid_json(grid);
  if (command == "verify") {
    j["ensemble"] = ensemble.to_json();
    j["ensemble"]["ids"] = ids.empty() ? inequality_ids() : ids;
    return j;
  }
  j["datum"] = datum.to_json();
  j["solver"] = solver.to_json();
  if (command == "norms") {
    auto a = nlohmann::ordered_json::array();
    for (const auto& n : norms) a.push_back(nlohmann::ordered_json(n.to_json()));
    j["norms"] = a;
  }
  if (command == "radius") {
    nlohmann::ordered_json r;
    r["t_list"] = t_list;
    r["rel_min"] = window.rel_min;
    r["rel_max"] = window.rel_max;
    r["min_shells"] = window.min_shells;
    j["radius"] = r;
  }
  return j;
}

nlohmann::json toml_to_json(const std::string& text, const std::string& source) {
  try {
    const toml::table t = toml::parse(text, source);
    return node_to_json(t);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config: " << e.description() << " at " << source << ":" << e.source().begin.line << ":"
       << e.source().begin.column;
    fail(ErrorKind::Validation, os.str());
  }
}

ExperimentConfig parse_config(const nlohmann::json& j, std::optional<std::uint64_t> seed_override,
                              const std::string& default_command) {
  if (!j.is_object()) fail(ErrorKind::Validation, "config: top level must be a table");
  static const std::set<std::string> known{"command", "seed", "output_dir", "grid", "datum",
                                           "solver",  "norms", "ensemble",  "radius"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) fail(ErrorKind::Validation, k + ": unknown config key");
  ExperimentConfig c;
  section("command", [&] {
    c.command = j.contains("command") ? j.at("command").get<std::string>() : default_command;
    if (!default_command.empty() && c.command != default_command)
      fail(ErrorKind::Validation, "command: config says '" + c.command + "' but subcommand is '" + default_command + "'");
    return 0;
  });
  section("seed", [&] {
    if (j.contains("seed")) {
      const auto s = j.at("seed").get<std::int64_t>();
      if (s < 0) fail(ErrorKind::Validation, "seed must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    }
    return 0;
  });
  if (seed_override) c.seed = *seed_override;
  section("output_dir", [&] {
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    return 0;
  });
  const nlohmann::json empty = nlohmann::json::object();
  auto sub = [&](const char* k) -> const nlohmann::json& { return j.contains(k) ? j.at(k) : empty; };
  c.grid = section("grid", [&] { return grid_from_json(sub("grid")); });
  c.datum = section("datum", [&] {
    nlohmann::json d = sub("datum");
    check_keys("datum", d, {"kind", "amplitude", "decay", "rate", "seed", "mode", "measure"});
    if (d.contains("measure")) check_keys("datum.measure", d.at("measure"), kNormKeys);
    if (seed_override || !d.contains("seed")) d["seed"] = c.seed;
    return DatumSpec::from_json(d);
  });
  c.solver = section("solver", [&] {
    const auto& sj = sub("solver");
    check_keys("solver", sj,
               {"scheme", "p", "alpha", "T", "dt", "n_picard", "picard_time_samples", "smallness_space", "delta",
                "weight", "gns_epsilon", "continuation_norms", "nonlinear", "picard_tol", "output_times",
                "n_records", "diagnostic_norms", "calibrated_constant"});
    return SolverConfig::from_json(sj, c.grid.n_dims);
  });
  section("norms", [&] {
    if (j.contains("norms"))
      for (const auto& n : j.at("norms")) {
        check_keys("norms", n, kNormKeys);
        c.norms.push_back(NormSpec::from_json(n));
      }
    return 0;
  });
  c.ensemble = section("ensemble", [&] {
    nlohmann::json e = sub("ensemble");
    check_keys("ensemble", e,
               {"ids", "n_samples", "field_law", "decay", "block_index", "rate", "resolutions", "seed", "n_dims",
                "alpha", "p_values", "drift_bound"});
    if (e.contains("ids")) {
      c.ids = e.at("ids").get<std::vector<std::string>>();
      e.erase("ids");
    }
    if (seed_override || !e.contains("seed")) e["seed"] = c.seed;
    if (!e.contains("n_dims")) e["n_dims"] = c.grid.n_dims;
    return EnsembleSpec::from_json(e);
  });
  section("radius", [&] {
    const auto& r = sub("radius");
    check_keys("radius", r, {"t_list", "rel_min", "rel_max", "min_shells"});
    if (r.contains("t_list")) c.t_list = r.at("t_list").get<std::vector<double>>();
    c.window.rel_min = r.value("rel_min", c.window.rel_min);
    c.window.rel_max = r.value("rel_max", c.window.rel_max);
    c.window.min_shells = r.value("min_shells", c.window.min_shells);
    return 0;
  });
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file, std::optional<std::uint64_t> seed_override,
                             const std::string& default_command) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "--config: cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(toml_to_json(ss.str(), file.string()), seed_override, default_command);
}

std::vector<std::filesystem::path> run(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  Artifacts art(out_dir(cfg));
  if (cfg.command == "solve")
    run_solve(cfg, art, log);
  else if (cfg.command == "picard")
    run_picard(cfg, art, log);
  else if (cfg.command == "norms")
    run_norms(cfg, art, log);
  else if (cfg.command == "verify")
    run_verify(cfg, art, log);
  else
    run_radius(cfg, art, log);
  return art.finish(cfg);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Unstable:
    case ErrorKind::UnstableWeight:
    case ErrorKind::Overflow:
    case ErrorKind::UndefinedRadius:
    case ErrorKind::CalibrationRefused:
      return kNumerical;
    case ErrorKind::Io:
      return kInfrastructure;
    default:
      return kValidation;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral solver and function-space toolkit for fractional Navier-Stokes"};
  app.require_subcommand(1);
  std::string config;
  std::optional<std::int64_t> seed;
  bool quiet = false;
  for (const char* name : {"solve", "picard", "norms", "verify", "radius", "run"}) {
    auto* sc = app.add_subcommand(name, std::string(name) == "run" ? "run the command named in the config"
                                                                    : std::string("run the ") + name + " experiment");
    sc->add_option("--config", config, "TOML experiment file")->required();
    sc->add_option("--seed", seed, "override every seed in the config");
    sc->add_flag("--quiet", quiet, "suppress progress output");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? kOk : kValidation;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  std::ostringstream sink;
  std::ostream& log = quiet ? sink : out;
  try {
    if (seed && *seed < 0) fail(ErrorKind::Validation, "--seed must be nonnegative");
    std::optional<std::uint64_t> s;
    if (seed) s = static_cast<std::uint64_t>(*seed);
    const ExperimentConfig cfg = load_config(config, s, sub == "run" ? "" : sub);
    const auto files = run(cfg, log);
    log << "wrote " << files.size() << " files to " << out_dir(cfg).string() << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error (io): " << e.what() << "\n";
    return kInfrastructure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInfrastructure;
  }
}

}  // namespace gevrey::cli
