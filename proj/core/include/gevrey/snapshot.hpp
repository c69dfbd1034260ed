#pragma once

#include <filesystem>

#include "gevrey/field.hpp"

namespace gevrey {

// Writes <stem>.json (header) and <stem>.bin (little-endian complex128).
// Returns the two paths written.
std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(
    const SpectralField& f, const std::filesystem::path& stem);
SpectralField read_snapshot(const std::filesystem::path& header);

}  // namespace gevrey
