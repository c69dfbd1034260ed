#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gevrey {

// %.17g, locale independent; non-finite values as inf / -inf / nan.
std::string format_double(double v);
std::string csv_row(const std::vector<std::string>& cells);
std::string csv_row(const std::vector<double>& values);

void write_text(const std::filesystem::path& path, const std::string& text);
// Two-space indented dump with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace gevrey
