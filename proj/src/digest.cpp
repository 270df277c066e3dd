#include "stablefrac/digest.hpp"

#include <fmt/format.h>

namespace sf {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string json_digest(const nlohmann::json& j) { return fmt::format("{:016x}", fnv1a64(j.dump())); }

}  // namespace sf
