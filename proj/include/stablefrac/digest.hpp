#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace sf {

// FNV-1a 64 over bytes.
std::uint64_t fnv1a64(const std::string& bytes);
// Hex FNV-1a of the canonical dump (sorted keys, no whitespace).
std::string json_digest(const nlohmann::json& j);

}  // namespace sf
