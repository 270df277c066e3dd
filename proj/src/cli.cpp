#include "stablefrac/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stablefrac/densities.hpp"
#include "stablefrac/digest.hpp"
#include "stablefrac/errors.hpp"
#include "stablefrac/families.hpp"
#include "stablefrac/geometry.hpp"
#include "stablefrac/optimizer.hpp"
#include "stablefrac/spectral.hpp"
#include "stablefrac/verifier.hpp"

namespace sf::cli {

using nlohmann::json;

namespace {

[[noreturn]] void violation(const std::string& ptr, const std::string& msg) {
  throw Error(ErrorKind::SchemaViolation, fmt::format("{}: {}", ptr.empty() ? "/" : ptr, msg), ptr);
}

// Validates one JSON object against a fixed key set and builds its canonical form.
class Obj {
 public:
  Obj(const json& j, std::string ptr, std::set<std::string> allowed) : j_(j), ptr_(std::move(ptr)) {
    if (!j.is_object()) violation(ptr_, "expected an object");
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) violation(ptr_ + "/" + k, "unknown key");
  }

  const std::string& ptr() const { return ptr_; }
  std::string at(const std::string& k) const { return ptr_ + "/" + k; }
  bool has(const std::string& k) const { return j_.contains(k); }
  const json& raw(const std::string& k) const {
    if (!has(k)) violation(at(k), "required key missing");
    return j_.at(k);
  }

  double num(const std::string& k, std::optional<double> def, const std::function<bool(double)>& ok,
             const char* what) {
    double v;
    if (!has(k)) {
      if (!def) violation(at(k), "required key missing");
      v = *def;
    } else {
      if (!j_.at(k).is_number()) violation(at(k), "expected a number");
      v = j_.at(k).get<double>();
    }
    if (!std::isfinite(v) || !ok(v)) violation(at(k), std::string("must be ") + what);
    out[k] = v;
    return v;
  }

  long integer(const std::string& k, std::optional<long> def, const std::function<bool(long)>& ok, const char* what) {
    long v;
    if (!has(k)) {
      if (!def) violation(at(k), "required key missing");
      v = *def;
    } else {
      if (!j_.at(k).is_number_integer()) violation(at(k), "expected an integer");
      v = j_.at(k).get<long>();
    }
    if (!ok(v)) violation(at(k), std::string("must be ") + what);
    out[k] = v;
    return v;
  }

  std::string str(const std::string& k, std::optional<std::string> def, const std::set<std::string>& choices = {}) {
    std::string v;
    if (!has(k)) {
      if (!def) violation(at(k), "required key missing");
      v = *def;
    } else {
      if (!j_.at(k).is_string()) violation(at(k), "expected a string");
      v = j_.at(k).get<std::string>();
    }
    if (!choices.empty() && !choices.count(v)) {
      std::string list;
      for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
      violation(at(k), "must be one of " + list);
    }
    out[k] = v;
    return v;
  }

  std::vector<double> nums(const std::string& k, std::optional<std::vector<double>> def,
                           const std::function<bool(double)>& ok, const char* what, std::size_t min_len = 1,
                           std::size_t exact_len = 0) {
    std::vector<double> v;
    if (!has(k)) {
      if (!def) violation(at(k), "required key missing");
      v = *def;
    } else {
      const json& a = j_.at(k);
      if (!a.is_array()) violation(at(k), "expected an array of numbers");
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) violation(fmt::format("{}/{}", at(k), i), "expected a number");
        v.push_back(a[i].get<double>());
      }
    }
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!std::isfinite(v[i]) || !ok(v[i])) violation(fmt::format("{}/{}", at(k), i), std::string("must be ") + what);
    if (v.size() < min_len) violation(at(k), fmt::format("needs at least {} entries", min_len));
    if (exact_len && v.size() != exact_len) violation(at(k), fmt::format("needs exactly {} entries", exact_len));
    out[k] = v;
    return v;
  }

  json out = json::object();

 private:
  const json& j_;
  std::string ptr_;
};

auto any = [](double) { return true; };
auto positive = [](double v) { return v > 0; };
auto nonneg = [](double v) { return v >= 0; };

json parse_model(const json& j, const std::string& ptr) {
  Obj o(j, ptr, {"alpha", "dim", "sigma", "gamma"});
  o.num("alpha", std::nullopt, [](double a) { return a > 1 && a < 2; }, "in the open interval (1, 2)");
  const long d = o.integer("dim", std::nullopt, [](long v) { return v >= 1 && v <= 3; }, "1, 2 or 3");
  if (o.has("gamma")) o.num("gamma", std::nullopt, positive, "positive");
  Obj s(o.raw("sigma"), o.at("sigma"), {"kind", "weights_of", "atoms", "normalization", "mass", "profile", "order"});
  const std::string kind = s.str("kind", std::nullopt, {"discrete", "rotinv", "density"});
  auto only = [&](std::set<std::string> keys) {
    for (const auto& k : {"weights_of", "atoms", "normalization", "mass", "profile", "order"})
      if (s.has(k) && !keys.count(k)) violation(s.at(k), "not allowed for kind " + kind);
  };
  if (kind == "discrete") {
    only({"weights_of", "atoms"});
    s.str("weights_of", std::string("lambda1"), {"lambda1", "sigma"});
    const json& atoms = s.raw("atoms");
    if (!atoms.is_array() || atoms.empty()) violation(s.at("atoms"), "expected a nonempty array");
    json list = json::array();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      Obj a(atoms[i], fmt::format("{}/{}", s.at("atoms"), i), {"y", "w"});
      a.nums("y", std::nullopt, any, "finite", 1, d);
      a.num("w", std::nullopt, positive, "positive");
      list.push_back(a.out);
    }
    s.out["atoms"] = list;
  } else if (kind == "rotinv") {
    only({"normalization", "mass"});
    if (s.has("normalization") == s.has("mass")) violation(s.ptr(), "give exactly one of normalization, mass");
    if (s.has("mass")) s.num("mass", std::nullopt, positive, "positive");
    else s.str("normalization", std::nullopt, {"canonical"});
  } else {
    only({"profile", "order"});
    Obj p(s.raw("profile"), s.at("profile"), {"constant", "axes", "power"});
    p.num("constant", 0.0, nonneg, "nonnegative");
    p.nums("axes", std::vector<double>(d, 0.0), nonneg, "nonnegative", 1, d);
    p.num("power", 2.0, positive, "positive");
    s.out["profile"] = p.out;
    s.integer("order", 0, [](long v) { return v >= 0; }, "nonnegative");
  }
  o.out["sigma"] = s.out;
  return o.out;
}

json parse_shape(const json& j, const std::string& ptr, int d) {
  Obj o(j, ptr, {"kind", "half", "center", "q", "radius"});
  const std::string kind = o.str("kind", std::nullopt, {"rectangle", "lq_ball", "sigma_dual_ball"});
  if (kind == "rectangle") {
    if (o.has("q") || o.has("radius")) violation(ptr, "rectangle takes half and center");
    o.nums("half", std::nullopt, positive, "positive", 1, d);
  } else {
    if (o.has("half")) violation(o.at("half"), "not allowed for kind " + kind);
    if (kind == "lq_ball") o.num("q", 2.0, [](double q) { return q >= 1; }, ">= 1");
    else if (o.has("q")) violation(o.at("q"), "not allowed for kind " + kind);
    o.num("radius", 1.0, positive, "positive");
  }
  o.nums("center", std::vector<double>(d, 0.0), any, "finite", 1, d);
  return o.out;
}

Shape make_shape(const json& j, const StableModel& m) {
  const std::string kind = j.at("kind");
  const Vec c = j.at("center").get<Vec>();
  if (kind == "rectangle") return Hyperrectangle{j.at("half").get<Vec>(), c};
  if (kind == "lq_ball") return LqBall{j.at("q").get<double>(), j.at("radius").get<double>(), c};
  return SigmaDualBall{m, j.at("radius").get<double>(), c};
}

std::vector<double> default_ts(double hi, int n) {
  std::vector<double> t;
  for (int k = 0; k < n; ++k) t.push_back(hi * std::pow(0.8, k));
  return t;
}

auto decreasing = [](const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
};

json parse_doc(const json& j) {
  Obj o(j, "", {"model", "grid", "seed", "out", "threads", "density", "semigroup", "perimeter", "heat_content",
                "verify", "asymptotic", "optimize"});
  const json model = parse_model(o.raw("model"), "/model");
  o.out["model"] = model;
  const int d = model.at("dim");
  {
    Obj g(o.raw("grid"), "/grid", {"L", "N"});
    g.num("L", std::nullopt, positive, "positive");
    g.integer("N", std::nullopt, [](long n) { return n >= 8 && n % 2 == 0 && n <= 8192; }, "even, between 8 and 8192");
    o.out["grid"] = g.out;
  }
  if (o.has("seed")) {
    const auto& sv = j.at("seed");
    if (!sv.is_number_integer() || (!sv.is_number_unsigned() && sv.get<long long>() < 0))
      violation("/seed", "expected a nonnegative integer");
    o.out["seed"] = j.at("seed").get<std::uint64_t>();
  } else {
    o.out["seed"] = std::uint64_t{0};
  }
  o.str("out", std::string("stablefrac_out"));
  o.integer("threads", 1, [](long v) { return v >= 1 && v <= 256; }, "between 1 and 256");

  if (o.has("density")) {
    Obj b(j.at("density"), "/density", {"moments_p", "points", "profile_rmax", "profile_n"});
    b.nums("moments_p", std::vector<double>{1.5, 2.0}, [](double p) { return p > 1; }, "> 1");
    json pts = json::array();
    if (b.has("points")) {
      const json& a = j.at("density").at("points");
      if (!a.is_array()) violation("/density/points", "expected an array of points");
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string pp = fmt::format("/density/points/{}", i);
        if (!a[i].is_array() || static_cast<int>(a[i].size()) != d) violation(pp, fmt::format("expected {} numbers", d));
        for (std::size_t k = 0; k < a[i].size(); ++k)
          if (!a[i][k].is_number()) violation(fmt::format("{}/{}", pp, k), "expected a number");
        pts.push_back(a[i]);
      }
    }
    b.out["points"] = pts;
    b.num("profile_rmax", 5.0, positive, "positive");
    b.integer("profile_n", 101, [](long n) { return n >= 2 && n <= 100000; }, "between 2 and 100000");
    o.out["density"] = b.out;
  }
  if (o.has("semigroup")) {
    Obj b(j.at("semigroup"), "/semigroup", {"t", "width"});
    b.nums("t", std::vector<double>{0.01, 0.1, 1.0}, nonneg, "nonnegative");
    b.num("width", 1.0, positive, "positive");
    o.out["semigroup"] = b.out;
  }
  if (o.has("perimeter")) {
    Obj b(j.at("perimeter"), "/perimeter", {"shape", "t", "kind"});
    b.out["shape"] = parse_shape(b.raw("shape"), "/perimeter/shape", d);
    const auto t = b.nums("t", default_ts(0.31, 10), positive, "positive", 4);
    if (!decreasing(t)) violation("/perimeter/t", "must be strictly decreasing");
    b.str("kind", std::string("both"), {"cl", "frac", "both"});
    o.out["perimeter"] = b.out;
  }
  if (o.has("heat_content")) {
    Obj b(j.at("heat_content"), "/heat_content", {"shape", "t", "evolution"});
    b.out["shape"] = parse_shape(b.raw("shape"), "/heat_content/shape", d);
    const auto t = b.nums("t", default_ts(0.31, 10), positive, "positive", 5);
    if (!decreasing(t)) violation("/heat_content/t", "must be strictly decreasing");
    b.str("evolution", std::string("stable"), {"stable", "gaussian"});
    o.out["heat_content"] = b.out;
  }
  if (o.has("verify")) {
    Obj b(j.at("verify"), "/verify", {"suite", "checks", "times", "beta", "T", "levels"});
    b.str("suite", std::string("core"), {"core", "all"});
    json checks = json::array();
    if (b.has("checks")) {
      const json& a = j.at("verify").at("checks");
      if (!a.is_array()) violation("/verify/checks", "expected an array of names");
      const auto& names = registry_names();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_string() || std::find(names.begin(), names.end(), a[i].get<std::string>()) == names.end())
          violation(fmt::format("/verify/checks/{}", i), "unknown check");
        checks.push_back(a[i]);
      }
    }
    b.out["checks"] = checks;
    b.nums("times", std::vector<double>{0.01, 0.1, 1.0}, positive, "positive");
    b.num("beta", 1.3, [](double v) { return v > 1 && v < 2; }, "in the open interval (1, 2)");
    b.nums("T", std::vector<double>{2, 4, 8}, positive, "positive");
    b.integer("levels", 32, [](long v) { return v >= 2 && v <= 4096; }, "between 2 and 4096");
    o.out["verify"] = b.out;
  }
  if (o.has("asymptotic")) {
    Obj b(j.at("asymptotic"), "/asymptotic", {"kind", "alphas_bbm", "alphas_ms", "p", "width"});
    b.str("kind", std::string("both"), {"BBM", "MS", "both"});
    auto in = [](double a) { return a > 1 && a < 2; };
    b.nums("alphas_bbm", std::vector<double>{1.5, 1.7, 1.8, 1.9, 1.95, 1.98, 1.99}, in, "in (1, 2)", 5);
    b.nums("alphas_ms", std::vector<double>{1.5, 1.3, 1.2, 1.1, 1.05, 1.02, 1.01, 1.005}, in, "in (1, 2)", 5);
    b.num("p", 2.0, [](double p) { return p >= 1; }, ">= 1");
    b.num("width", 1.0, positive, "positive");
    o.out["asymptotic"] = b.out;
  }
  if (o.has("optimize")) {
    Obj b(j.at("optimize"), "/optimize", {"p", "max_iter", "rtol", "widths"});
    b.num("p", 2.0, [](double p) { return p > 1; }, "> 1");
    b.integer("max_iter", 10000, [](long v) { return v >= 1; }, "positive");
    b.num("rtol", 1e-8, positive, "positive");
    b.nums("widths", std::vector<double>{1.0 / 8, 1.0 / 12, 1.0 / 5}, positive, "positive");
    o.out["optimize"] = b.out;
  }
  return o.out;
}

std::string out_dir(const ExperimentConfig& c, const std::string& flag) {
  if (const char* env = std::getenv("STABLEFRAC_OUT"); env && *env) return env;
  if (!flag.empty()) return flag;
  return c.out();
}

std::string num17(double v) { return fmt::format("{:.17g}", v); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::BadSpec, "cannot write " + path);
  os << text;
}

json envelope(const ExperimentConfig& c, const std::string& command, json results) {
  json cfg = c.doc;
  cfg.erase("out");
  return {{"command", command}, {"config", cfg}, {"config_digest", config_digest(c)}, {"seed", c.seed()},
          {"results", std::move(results)}};
}

json block(const ExperimentConfig& c, const std::string& key) {
  if (c.doc.contains(key)) return c.doc.at(key);
  // An absent block takes its defaults.
  json tmp = c.doc;
  tmp[key] = json::object();
  if (key == "perimeter" || key == "heat_content") violation("/" + key, "block required for this command");
  tmp.erase("out");
  return parse_doc(tmp).at(key);
}

// ---- commands; each returns the exit code -----------------------------------------

int cmd_model(const ExperimentConfig& c, const std::string& dir) {
  const StableModel m = c.model();
  const auto gc = geometry_constants(m);
  json d = {{"alpha", m.alpha()},
            {"dim", m.dim()},
            {"nondeg_margin", m.nondeg_margin()},
            {"sigma_matrix", m.sigma_matrix()},
            {"sigma_mass", m.sigma_mass()},
            {"lambda1_mass", m.lambda1_mass()},
            {"vol_K", gc.vol_K},
            {"vol_K_polar", gc.vol_K_polar},
            {"model", m.to_json()}};
  std::cout << d.dump(2) << "\n";
  emit_report(envelope(c, "model", d), dir);
  return 0;
}

int cmd_density(const ExperimentConfig& c, const std::string& dir) {
  const StableModel m = c.model();
  const json b = block(c, "density");
  json res = {{"moments", moments(m, b.at("moments_p").get<std::vector<double>>())}};
  json pts = json::array();
  for (const auto& p : b.at("points")) {
    const Vec x = p.get<Vec>();
    Vec gr(m.dim());
    density_grad(m, x.data(), gr.data());
    pts.push_back({{"x", x}, {"p", density_point(m, x.data())}, {"grad", gr}});
  }
  res["points"] = pts;
  const double rmax = b.at("profile_rmax");
  const int n = b.at("profile_n");
  std::string csv = "r,p,grad_norm\n";
  for (int k = 0; k < n; ++k) {
    Vec x(m.dim(), 0.0), gr(m.dim());
    x[0] = rmax * k / (n - 1);
    density_grad(m, x.data(), gr.data());
    double gn = 0;
    for (double v : gr) gn += v * v;
    csv += fmt::format("{},{},{}\n", num17(x[0]), num17(density_point(m, x.data())), num17(std::sqrt(gn)));
  }
  write_text(dir + "/density_profile.csv", csv);
  std::cout << res.at("moments").dump() << "\n";
  emit_report(envelope(c, "density", res), dir);
  return 0;
}

int cmd_semigroup(const ExperimentConfig& c, const std::string& dir) {
  const StableModel m = c.model();
  const Grid g = c.grid();
  const json b = block(c, "semigroup");
  const Field f = gaussian_bump(g, b.at("width").get<double>());
  std::string csv = "t,mass,l1,l2,sup\n";
  json rows = json::array();
  Field last = f;
  for (double t : b.at("t").get<std::vector<double>>()) {
    last = semigroup(m, f, t);
    const double mass = integral(last), l1 = lp_norm(last, 1), l2 = lp_norm(last, 2), sup = sup_abs(last);
    csv += fmt::format("{},{},{},{},{}\n", num17(t), num17(mass), num17(l1), num17(l2), num17(sup));
    rows.push_back({{"t", t}, {"mass", mass}, {"l1", l1}, {"l2", l2}, {"sup", sup}});
  }
  write_text(dir + "/semigroup.csv", csv);
  write_sfld(last, dir + "/semigroup_last.sfld");
  fmt::print("initial mass {:.12g}, final mass {:.12g}\n", integral(f), rows.back().at("mass").get<double>());
  emit_report(envelope(c, "semigroup", rows), dir);
  return 0;
}

int cmd_perimeter(const ExperimentConfig& c, const std::string& dir) {
  const StableModel m = c.model();
  const Grid g = c.grid();
  const json b = block(c, "perimeter");
  const Shape s = make_shape(b.at("shape"), m);
  const auto ts = b.at("t").get<std::vector<double>>();
  const std::string kind = b.at("kind");
  json res = json::object();
  std::string csv = "kind,t,value\n";
  auto study = [&](const std::string& k, const PerimeterStudy& p) {
    for (std::size_t i = 0; i < p.t.size(); ++i) csv += fmt::format("{},{},{}\n", k, num17(p.t[i]), num17(p.value[i]));
    res[k] = to_json(p);
    fmt::print("perimeter {} extrapolated {:.8g}\n", k, p.limit);
  };
  if (kind != "frac") {
    study("cl", perimeter_cl(m, g, s, ts));
    try {
      res["cl_exact"] = surface_perimeter_aniso(m, s);
      fmt::print("perimeter cl closed form {:.8g}\n", res["cl_exact"].get<double>());
    } catch (const Error&) {
      res["cl_exact"] = nullptr;
    }
  }
  if (kind != "cl") study("frac", perimeter_frac(m, g, s, ts));
  write_text(dir + "/perimeter_study.csv", csv);
  emit_report(envelope(c, "perimeter", res), dir);
  return 0;
}

int cmd_heat(const ExperimentConfig& c, const std::string& dir) {
  const StableModel m = c.model();
  const Grid g = c.grid();
  const json b = block(c, "heat_content");
  const Shape s = make_shape(b.at("shape"), m);
  const auto ts = b.at("t").get<std::vector<double>>();
  const SlopeFit f = b.at("evolution") == "gaussian" ? gaussian_heat_content_slope(g, s, ts)
                                                      : heat_content_slope(m, g, s, ts);
  std::string csv = "t,K,K_refined\n";
  for (std::size_t i = 0; i < f.t.size(); ++i)
    csv += fmt::format("{},{},{}\n", num17(f.t[i]), num17(f.K[i]), num17(f.K_refined[i]));
  write_text(dir + "/heat_content.csv", csv);
  fmt::print("heat-content slope {:.8g} (reference {:.8g}, ratio {:.6f})\n", f.slope, f.reference, f.ratio);
  emit_report(envelope(c, "heat-content", to_json(f)), dir);
  return 0;
}

int cmd_verify(const ExperimentConfig& c, const std::string& dir, const std::string& suite_flag) {
  const StableModel m = c.model();
  const Grid g = c.grid();
  const json b = block(c, "verify");
  CheckInputs in;
  in.seed = c.seed();
  in.times = b.at("times").get<std::vector<double>>();
  in.beta = b.at("beta");
  in.T_list = b.at("T").get<std::vector<double>>();
  in.levels = b.at("levels");
  std::vector<std::string> names = b.at("checks").get<std::vector<std::string>>();
  if (!suite_flag.empty() || names.empty()) names = suite_entries(suite_flag.empty() ? b.at("suite").get<std::string>() : suite_flag);
  in.family = default_family(g, in.seed);
  std::vector<InequalityReport> reps;
  for (const auto& n : names) reps.push_back(evaluate_inequality(n, m, g, in));
  json arr = json::array();
  std::string csv = "name,verdict,lhs,rhs,margin,tolerance,constant\n";
  for (const auto& r : reps) {
    arr.push_back(r.to_json());
    csv += fmt::format("{},{},{},{},{},{},{}\n", r.name, verdict_name(r.verdict), num17(r.lhs), num17(r.rhs),
                       num17(r.margin), num17(r.tolerance), num17(r.constant));
    fmt::print("{:<26} {:<11} margin {:.4g}\n", r.name, verdict_name(r.verdict), r.margin);
  }
  write_text(dir + "/verify_summary.csv", csv);
  emit_report(envelope(c, "verify", arr), dir);
  return all_passed(reps) ? 0 : 1;
}

int cmd_asymptotic(const ExperimentConfig& c, const std::string& dir) {
  const StableModel m = c.model();
  const Grid g = c.grid();
  const json b = block(c, "asymptotic");
  const Field f = gaussian_bump(g, b.at("width").get<double>());
  const std::string kind = b.at("kind");
  json res = json::object();
  bool ok = true;
  for (const std::string k : {"BBM", "MS"}) {
    if (kind != "both" && kind != k) continue;
    const auto alphas = b.at(k == "BBM" ? "alphas_bbm" : "alphas_ms").get<std::vector<double>>();
    const auto s = asymptotic_study(k, m, f, alphas, b.at("p").get<double>());
    std::string csv = "alpha,error\n";
    for (std::size_t i = 0; i < s.alpha.size(); ++i) csv += fmt::format("{},{}\n", num17(s.alpha[i]), num17(s.error[i]));
    write_text(dir + "/asymptotic_" + k + ".csv", csv);
    res[k] = s.to_json();
    ok = ok && s.verdict == Verdict::Pass;
    fmt::print("{} final/initial {:.4g} {}\n", k, s.final_over_initial, verdict_name(s.verdict));
  }
  emit_report(envelope(c, "asymptotic", res), dir);
  return ok ? 0 : 1;
}

int cmd_optimize(const ExperimentConfig& c, const std::string& dir) {
  const StableModel m = c.model();
  const Grid g = c.grid();
  const json b = block(c, "optimize");
  OptimizeOptions o;
  o.max_iter = b.at("max_iter");
  o.rtol = b.at("rtol");
  o.widths = b.at("widths").get<std::vector<double>>();
  o.threads = c.threads();
  const auto r = minimize_sobolev(m, g, b.at("p").get<double>(), o);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  write_trace_csv(r.best, dir + "/optimize_trace.csv");
  write_sfld(r.best.f, dir + "/minimizer.sfld");
  fmt::print("S_estimate {:.10g} (upper bound), EL residual {:.3g}\n", r.S_estimate, r.el_residual);
  emit_report(envelope(c, "optimize", r.to_json()), dir);
  return 0;
}

}  // namespace

Grid ExperimentConfig::grid() const {
  return Grid(doc.at("model").at("dim").get<int>(), doc.at("grid").at("N").get<int>(), doc.at("grid").at("L").get<double>());
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  c.doc = parse_doc(j);
  try {
    (void)c.model();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaViolation) throw;
    throw Error(ErrorKind::SchemaViolation, std::string("/model: ") + e.what(), "/model");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::SchemaViolation, "cannot read config " + path, "");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaViolation, std::string("config is not valid JSON: ") + e.what(), "");
  }
  return parse_config(j);
}

std::string config_digest(const ExperimentConfig& c) {
  json d = c.doc;
  d.erase("out");
  return json_digest(d);
}

void emit_report(const json& reports, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir + "/reports.json", reports.dump(2) + "\n");
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"stablefrac: anisotropic stable operators, inequalities and perimeters"};
  app.require_subcommand(1);
  std::string config, out, suite;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool describe = false;
  std::string positional;
  const std::vector<std::string> names{"model", "density", "semigroup", "perimeter",
                                       "heat-content", "verify", "asymptotic", "optimize"};
  for (const auto& n : names) {
    auto* sc = app.add_subcommand(n);
    sc->add_option("--config", config, "JSON experiment config");
    sc->add_option("--out", out, "output directory (STABLEFRAC_OUT overrides)");
    sc->add_option("--seed", seed, "seed for the random test functions");
    sc->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    if (n == "verify") sc->add_option("--suite", suite, "core or all")->check(CLI::IsMember({"core", "all"}));
    if (n == "model") {
      sc->add_flag("--describe", describe, "print derived constants");
      sc->add_option("path", positional, "config (alternative to --config)");
    }
  }
  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
  std::string cmd;
  for (const auto* sc : app.get_subcommands()) cmd = sc->get_name();
  if (config.empty()) config = positional;
  if (config.empty()) {
    std::cerr << "usage error: --config is required\n";
    return 2;
  }
  try {
    ExperimentConfig c = load_config(config);
    if (seed) c.doc["seed"] = *seed;
    if (threads) c.doc["threads"] = *threads;
    fmt::print("config digest: {}\n", config_digest(c));
    std::fflush(stdout);
    const std::string dir = out_dir(c, out);
    std::filesystem::create_directories(dir);
    if (cmd == "model") return cmd_model(c, dir);
    if (cmd == "density") return cmd_density(c, dir);
    if (cmd == "semigroup") return cmd_semigroup(c, dir);
    if (cmd == "perimeter") return cmd_perimeter(c, dir);
    if (cmd == "heat-content") return cmd_heat(c, dir);
    if (cmd == "verify") return cmd_verify(c, dir, suite);
    if (cmd == "asymptotic") return cmd_asymptotic(c, dir);
    return cmd_optimize(c, dir);
  } catch (const Error& e) {
    std::fflush(stdout);
    if (e.kind() == ErrorKind::SchemaViolation)
      std::cerr << "validation error at " << (e.pointer().empty() ? "/" : e.pointer()) << ": " << e.what() << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return is_validation(e.kind()) ? 3 : 1;
  } catch (const std::exception& e) {
    std::fflush(stdout);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

}  // namespace sf::cli
