#include "gevrey/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "gevrey/error.hpp"

namespace gevrey {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(
    const SpectralField& f, const std::filesystem::path& stem) {
  std::filesystem::path header = stem;
  header += ".json";
  std::filesystem::path bin = stem;
  bin += ".bin";
  nlohmann::ordered_json h;
  h["n_dims"] = f.grid.n_dims;
  h["resolution"] = f.grid.N;
  h["period"] = f.grid.period;
  h["components"] = f.components;
  h["dtype"] = "complex128";
  h["layout"] = "row-major, component-major";
  h["divergence_free"] = f.divergence_free;
  h["data"] = bin.filename().string();
  {
    std::ofstream out(header);
    if (!out) fail(ErrorKind::Io, "cannot write " + header.string());
    out << h.dump(2) << "\n";
  }
  std::ofstream out(bin, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + bin.string());
  out.write(reinterpret_cast<const char*>(f.data.data()),
            static_cast<std::streamsize>(f.data.size() * sizeof(cplx)));
  return {header, bin};
}

SpectralField read_snapshot(const std::filesystem::path& header) {
  std::ifstream in(header);
  if (!in) fail(ErrorKind::Io, "cannot read " + header.string());
  nlohmann::json h;
  try {
    in >> h;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, "snapshot header: " + std::string(e.what()));
  }
  if (h.value("dtype", "") != "complex128")
    fail(ErrorKind::Validation, "snapshot header: dtype must be complex128");
  Grid g;
  g.n_dims = h.at("n_dims").get<int>();
  g.N = h.at("resolution").get<int>();
  g.period = h.at("period").get<double>();
  SpectralField f(g, h.at("components").get<int>());
  f.divergence_free = h.value("divergence_free", false);
  const auto bin = header.parent_path() / h.at("data").get<std::string>();
  std::ifstream b(bin, std::ios::binary);
  if (!b) fail(ErrorKind::Io, "cannot read " + bin.string());
  const auto bytes = static_cast<std::streamsize>(f.data.size() * sizeof(cplx));
  b.read(reinterpret_cast<char*>(f.data.data()), bytes);
  if (b.gcount() != bytes) fail(ErrorKind::Validation, "snapshot data truncated: " + bin.string());
  return f;
}

}  // namespace gevrey
