#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gevrey/digest.hpp"
#include "gevrey/io.hpp"
#include "gevrey_cli/cli.hpp"

namespace fs = std::filesystem;
using namespace gevrey;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gevrey");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  return cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = fs::path("cli_cfg") / name;
  fs::create_directories(p.parent_path());
  std::ofstream(p) << body;
  return p;
}

std::map<std::string, std::string> digests(const fs::path& dir) {
  std::map<std::string, std::string> d;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) d[fs::relative(e.path(), dir).string()] = sha256_file(e.path());
  return d;
}

const std::string kNorms = R"(command = "norms"
seed = 3
output_dir = "cli_out/norms"
[grid]
n_dims = 2
N = 32
[datum]
kind = "analytic"
rate = 0.5
[[norms]]
family = "besov"
s = 0.0
p = 2
q = 2
[[norms]]
family = "exp_modulation"
s = 0.25
p = "inf"
q = 1
)";

}  // namespace

TEST_CASE("norms subcommand writes a manifest with digests") {
  auto cfg = write_config("norms.toml", kNorms);
  REQUIRE(run_cli({"norms", "--config", cfg.string(), "--quiet"}) == 0);
  auto m = read_json("cli_out/norms/manifest.json");
  CHECK(m["command"] == "norms");
  CHECK(m["files"].size() >= 2);
  for (const auto& f : m["files"])
    CHECK(sha256_file(fs::path("cli_out/norms") / f["path"].get<std::string>()) == f["sha256"]);
}

TEST_CASE("repeated runs are byte identical") {
  auto cfg = write_config("norms.toml", kNorms);
  REQUIRE(run_cli({"norms", "--config", cfg.string(), "--quiet"}) == 0);
  auto a = digests("cli_out/norms");
  REQUIRE(run_cli({"norms", "--config", cfg.string(), "--quiet"}) == 0);
  CHECK(digests("cli_out/norms") == a);
}

TEST_CASE("seed override changes random data") {
  auto cfg = write_config("norms.toml", kNorms);
  REQUIRE(run_cli({"norms", "--config", cfg.string(), "--quiet", "--seed", "3"}) == 0);
  auto a = read_json("cli_out/norms/norms.json").dump();
  REQUIRE(run_cli({"norms", "--config", cfg.string(), "--quiet", "--seed", "4"}) == 0);
  CHECK(read_json("cli_out/norms/norms.json").dump() != a);
}

TEST_CASE("validation failures exit with 2") {
  auto bad_dt = write_config("bad_dt.toml", "command = \"solve\"\n[solver]\ndt = -1.0\n");
  CHECK(run_cli({"solve", "--config", bad_dt.string(), "--quiet"}) == 2);
  auto unknown = write_config("unknown.toml", "bogus = 1\n" + kNorms);
  CHECK(run_cli({"norms", "--config", unknown.string(), "--quiet"}) == 2);
  auto typo = write_config("typo.toml", kNorms + "typo_in_entry = 1\n");
  CHECK(run_cli({"norms", "--config", typo.string(), "--quiet"}) == 2);
  auto datum = write_config("datum.toml", "command = \"solve\"\n[datum]\namplitud = 2.0\n");
  CHECK(run_cli({"solve", "--config", datum.string(), "--quiet"}) == 2);
  auto syntax = write_config("syntax.toml", "command = \n");
  CHECK(run_cli({"norms", "--config", syntax.string(), "--quiet"}) == 2);
  CHECK(run_cli({"solve", "--config", write_config("n.toml", kNorms).string(), "--quiet"}) == 2);
}

TEST_CASE("missing config file is an I/O failure") {
  CHECK(run_cli({"norms", "--config", "cli_cfg/does_not_exist.toml", "--quiet"}) == 1);
}

TEST_CASE("numerical blow-up exits with 3") {
  auto cfg = write_config("blowup.toml", R"(command = "solve"
output_dir = "cli_out/blowup"
[grid]
N = 16
[datum]
kind = "random_div_free"
amplitude = 1e200
seed = 1
[solver]
scheme = "besov"
T = 0.1
dt = 0.01
)");
  CHECK(run_cli({"solve", "--config", cfg.string(), "--quiet"}) == 3);
}

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(ErrorKind::Validation) == 2);
  CHECK(cli::exit_code_for(ErrorKind::Unstable) == 3);
  CHECK(cli::exit_code_for(ErrorKind::CalibrationRefused) == 3);
  CHECK(cli::exit_code_for(ErrorKind::Io) == 1);
}

TEST_CASE("shipped configs parse") {
  for (const auto& e : fs::directory_iterator(GEVREY_CONFIG_DIR))
    if (e.path().extension() == ".toml") CHECK_NOTHROW(cli::load_config(e.path()).validate());
}
