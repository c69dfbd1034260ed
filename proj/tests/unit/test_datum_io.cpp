#include <filesystem>

#include "common.hpp"
#include "gevrey/datum.hpp"
#include "gevrey/digest.hpp"
#include "gevrey/error.hpp"
#include "gevrey/io.hpp"
#include "gevrey/snapshot.hpp"

using namespace gevrey;
namespace fs = std::filesystem;

TEST_SUITE("datum_io") {

TEST_CASE("sha256 test vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("double formatting round trips") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(csv_row(std::vector<std::string>{"a", "b"}) == "a,b\n");
}

TEST_CASE("every datum kind is divergence free, zero mean, Hermitian") {
  for (int n : {2, 3}) {
    Grid g{n, 16};
    for (const char* kind : {"taylor_green", "random_div_free", "single_mode", "analytic"}) {
      DatumSpec d;
      d.kind = kind;
      d.seed = 2;
      auto u = init_data(g, d);
      CHECK(divergence_defect(u) < 1e-13);
      CHECK(hermitian_defect(u) < 1e-14);
      for (int c = 0; c < u.components; ++c) CHECK(std::abs(u.at(c, 0)) == 0.0);
    }
  }
}

TEST_CASE("measured datum has the requested norm") {
  Grid g{2, 32};
  DatumSpec d;
  d.kind = "random_div_free";
  d.amplitude = 0.3;
  NormSpec n;
  n.s = 0.0;
  n.q = 1;
  d.measure = n;
  auto u = init_data(g, d);
  CHECK(norm(u, n) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("datum validation") {
  Grid g{2, 16};
  DatumSpec d;
  d.kind = "single_mode";
  d.mode = {9, 0, 0};
  CHECK_THROWS_AS(d.validate(g), Error);
  d.kind = "vortex";
  CHECK_THROWS_AS(d.validate(g), Error);
}

TEST_CASE("snapshot round trip is bitwise") {
  Grid g{3, 8};
  DatumSpec d;
  d.kind = "random_div_free";
  d.seed = 5;
  auto u = init_data(g, d);
  const fs::path dir = fs::temp_directory_path() / "gevrey_snapshot_test";
  fs::create_directories(dir);
  auto [hdr, bin] = write_snapshot(u, dir / "state");
  auto back = read_snapshot(hdr);
  CHECK(back.grid == g);
  CHECK(back.data == u.data);
  CHECK(sha256_file(bin).size() == 64);
  fs::remove_all(dir);
}

}
