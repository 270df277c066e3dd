#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablefrac/grid.hpp"
#include "stablefrac/stable_model.hpp"

namespace sf::cli {

struct ExperimentConfig {
  nlohmann::json doc;  // canonical form: validated, defaults filled in
  StableModel model() const { return model_from_json(doc.at("model")); }
  Grid grid() const;
  std::uint64_t seed() const { return doc.at("seed").get<std::uint64_t>(); }
  int threads() const { return doc.at("threads").get<int>(); }
  std::string out() const { return doc.at("out").get<std::string>(); }
};

// Strict validation; throws Error(SchemaViolation) carrying a JSON pointer.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Digest of the canonical config without "out", so results do not depend on where
// they are written.
std::string config_digest(const ExperimentConfig& c);

// Writes reports.json into dir (created if needed).
void emit_report(const nlohmann::json& reports, const std::string& dir);

// Exit codes: 0 success, 1 check failure or runtime error, 2 usage, 3 validation.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace sf::cli
