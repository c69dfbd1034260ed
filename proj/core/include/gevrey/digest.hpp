#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gevrey {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& p);

}  // namespace gevrey
