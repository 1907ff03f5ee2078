#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace ontocc {

std::string_view tool_version();

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// {"tool", "version", "seed", "config_hash"}; the hash covers config.dump().
nlohmann::json provenance(std::uint64_t seed, const nlohmann::json& config);

}  // namespace ontocc
