#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stablefrac/cli.hpp"
#include "stablefrac/errors.hpp"

using namespace sf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Proc {
  int code;
  std::string out;
};

// Runs the installed binary through the shell, capturing stdout.
Proc sh(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(STABLEFRAC_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = pclose(p);
  return {WEXITSTATUS(st), out};
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("stablefrac_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string write_json(const fs::path& dir, const json& j) {
  const auto p = dir / "config.json";
  std::ofstream(p) << j.dump();
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json small_config() {
  return {{"model", {{"alpha", 1.5}, {"dim", 2}, {"sigma", {{"kind", "rotinv"}, {"normalization", "canonical"}}}}},
          {"grid", {{"N", 32}, {"L", 6}}}};
}

std::string pointer_of(const json& j) {
  try {
    cli::parse_config(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaViolation);
    return e.pointer();
  }
  return "";
}

}  // namespace

TEST_CASE("config validation reports JSON pointers") {
  json bad = small_config();
  bad["model"]["alpha"] = 2.0;
  CHECK(pointer_of(bad) == "/model/alpha");
  json extra = small_config();
  extra["grid"]["M"] = 3;
  CHECK(pointer_of(extra) == "/grid/M");
  json top = small_config();
  top["colour"] = "blue";
  CHECK(pointer_of(top) == "/colour");
  json neg = small_config();
  neg["seed"] = -1;
  CHECK(pointer_of(neg) == "/seed");
}

TEST_CASE("canonical form is a fixed point and fills defaults") {
  const auto c = cli::parse_config(small_config());
  CHECK(c.seed() == 0);
  CHECK(c.threads() == 1);
  const auto c2 = cli::parse_config(c.doc);
  CHECK(c2.doc == c.doc);
  CHECK(cli::config_digest(c2) == cli::config_digest(c));
  json moved = c.doc;
  moved["out"] = "elsewhere";
  CHECK(cli::config_digest(cli::parse_config(moved)) == cli::config_digest(c));
  json reseeded = c.doc;
  reseeded["seed"] = 1;
  CHECK(cli::config_digest(cli::parse_config(reseeded)) != cli::config_digest(c));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli::run({"stablefrac"}) == 2);
  CHECK(cli::run({"stablefrac", "frobnicate"}) == 2);
  CHECK(cli::run({"stablefrac", "density"}) == 2);
  CHECK(cli::run({"stablefrac", "verify", "--config", "x.json", "--suite", "some"}) == 2);
}

TEST_CASE("validation errors exit with 3") {
  const auto d = scratch("validation");
  json bad = small_config();
  bad["model"]["alpha"] = 2.0;
  CHECK(sh("model --config " + write_json(d, bad) + " --out " + (d / "o").string()).code == 3);
  CHECK(sh("model --config " + (d / "missing.json").string()).code == 3);
}

TEST_CASE("model --describe prints the digest first and derived constants") {
  const auto d = scratch("describe");
  const auto r = sh("model --describe " + write_json(d, small_config()) + " --out " + (d / "o").string());
  CHECK(r.code == 0);
  CHECK(r.out.rfind("config digest: ", 0) == 0);
  CHECK(r.out.find("nondeg_margin") != std::string::npos);
  CHECK(fs::exists(d / "o" / "reports.json"));
}

TEST_CASE("verify core on the one-dimensional config succeeds") {
  const auto d = scratch("verify_ok");
  const auto r = sh("verify --config " + std::string(STABLEFRAC_CONFIGS) + "/prod_d1_a15.json --out " + d.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "verify_summary.csv"));
  const auto rep = json::parse(slurp(d / "reports.json"));
  CHECK(rep.at("results").size() == 13);
}

TEST_CASE("a failing check exits with 1") {
  // The Sobolev spread check fails on this anisotropic model.
  const auto d = scratch("verify_fail");
  const json c = json::parse(R"({"model": {"alpha": 1.8, "dim": 2, "sigma": {"kind": "discrete",
    "atoms": [{"y": [1, 0], "w": 0.5}, {"y": [0, 1], "w": 0.5}]}},
    "grid": {"N": 64, "L": 8}, "verify": {"checks": ["frac_sobolev"]}})");
  const auto r = sh("verify --config " + write_json(d, c) + " --out " + (d / "o").string());
  CHECK(r.code == 1);
}

TEST_CASE("outputs are byte-stable and STABLEFRAC_OUT overrides --out") {
  const auto d = scratch("stable");
  json c = small_config();
  c["semigroup"] = {{"t", {0.1, 0.5}}};
  const auto cfg = write_json(d, c);
  CHECK(sh("semigroup --config " + cfg + " --out " + (d / "a").string()).code == 0);
  CHECK(sh("semigroup --config " + cfg + " --out " + (d / "b").string()).code == 0);
  for (const char* f : {"reports.json", "semigroup.csv", "semigroup_last.sfld"}) {
    INFO(f);
    CHECK(slurp(d / "a" / f) == slurp(d / "b" / f));
    CHECK(!slurp(d / "a" / f).empty());
  }
  CHECK(sh("semigroup --config " + cfg + " --out " + (d / "c").string(), "STABLEFRAC_OUT=" + (d / "e").string()).code == 0);
  CHECK(fs::exists(d / "e" / "semigroup.csv"));
  CHECK(!fs::exists(d / "c"));
}

TEST_CASE("density command writes a profile") {
  const auto d = scratch("density");
  const auto r = sh("density --config " + write_json(d, small_config()) + " --out " + (d / "o").string());
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "o" / "density_profile.csv"));
}
