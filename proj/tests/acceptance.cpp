// Acceptance run: one line per criterion, exit status 1 if any line fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "stablefrac/densities.hpp"
#include "stablefrac/families.hpp"
#include "stablefrac/geometry.hpp"
#include "stablefrac/optimizer.hpp"
#include "stablefrac/spectral.hpp"
#include "stablefrac/verifier.hpp"

using namespace sf;

namespace {

constexpr double kPi = std::numbers::pi;

struct Line {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> geometric(double hi, double lo) {
  std::vector<double> t;
  for (double v = hi; v > lo; v *= 0.8) t.push_back(v);
  return t;
}

const Shape kSquare = Hyperrectangle{{1.0, 1.0}, {}};
const Shape kDisc = LqBall{2, 1, {}};

Line rectangle_perimeter() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = product_model(1.5, {0.5, 0.5});
  const auto p = perimeter_cl(m, Grid(2, 512, 8), kSquare, geometric(0.31, 0.04));
  const double dt = seconds_since(t0);
  return {p.limit >= 7.84 && p.limit <= 8.16 && dt < 60,
          fmt::format("extrapolated P_cl = {:.5f} (window [7.84, 8.16]), {:.1f} s", p.limit, dt)};
}

Line rectangle_slope() {
  const auto m = product_model(1.5, {0.5, 0.5});
  const Grid g(2, 512, 8);
  const auto ts = geometric(0.31, 0.04);
  const auto f = heat_content_slope(m, g, kSquare, ts);
  const auto p = perimeter_cl(m, g, kSquare, ts);
  const double target = 2 / kPi * std::tgamma(1.0 / 3) * 4, rt = std::tgamma(1.0 / 3) / kPi;
  const double e1 = f.slope / target - 1, e2 = f.slope / p.limit / rt - 1;
  return {std::abs(e1) <= 0.03 && std::abs(e2) <= 0.03,
          fmt::format("slope {:.5f} vs {:.5f} ({:+.2f}%), slope/P_cl {:.5f} vs {:.5f} ({:+.2f}%)", f.slope, target,
                      100 * e1, f.slope / p.limit, rt, 100 * e2)};
}

Line disc_slopes() {
  const Grid g(2, 512, 8);
  const auto f = heat_content_slope(rotational_model(1.5, 2), g, kDisc, geometric(0.31, 0.04));
  const auto gs = gaussian_heat_content_slope(g, kDisc, geometric(0.21, 0.0135));
  const double t1 = std::cbrt(2.0) * std::tgamma(1.0 / 3), t2 = 2 * std::sqrt(kPi);
  const double e1 = f.slope / t1 - 1, e2 = gs.slope / t2 - 1;
  return {std::abs(e1) <= 0.03 && std::abs(e2) <= 0.03,
          fmt::format("stable {:.5f} vs {:.5f} ({:+.2f}%), Gaussian {:.5f} vs {:.5f} ({:+.2f}%)", f.slope, t1, 100 * e1,
                      gs.slope, t2, 100 * e2)};
}

Line moments_line() {
  const double e = abs_moment_quadrature(1.5, 1.0), et = 2 * std::tgamma(1.0 / 3) / kPi;
  const double mass = density_1d_mass(1.5);
  const double p0 = density_1d(1.5, 0.0), p0t = std::tgamma(5.0 / 3) / kPi;
  const double r1 = std::abs(e / et - 1), r2 = std::abs(mass - 1), r3 = std::abs(p0 - p0t);
  return {r1 < 1e-4 && r2 < 1e-6 && r3 < 1e-6,
          fmt::format("E|Y| rel err {:.2e}, mass err {:.2e}, p(0) err {:.2e}", r1, r2, r3)};
}

Line composition() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  bool ok = true;
  for (auto [a, b] : {std::pair{1.4, 1.3}, std::pair{1.9, 1.1}}) {
    CheckInputs in;
    in.beta = b;
    const auto r = evaluate_inequality("composition_rot", rotational_model(a, 2), Grid(2, 256, 8), in);
    worst = std::max(worst, r.lhs);
    ok = ok && r.lhs < 1e-10;
  }
  const double dt = seconds_since(t0);
  return {ok && dt < 5, fmt::format("sup symbol error {:.2e}, {:.2f} s", worst, dt)};
}

Line fftc_line() {
  const auto m = product_model(1.5, {0.5, 0.5});
  const Grid g(2, 128, 12);
  // A smooth profile of width 3: P_t f is then within 2% of f already at t = 8^-1.5.
  CheckInputs in;
  in.family = {{"bump_3", gaussian_bump(g, 3.0)}};
  const auto r = evaluate_inequality("fftc", m, g, in);
  const auto& byT = r.details.at(0).at("by_T");
  const double d8 = byT.back().at("distance_to_f_mean_removed").get<double>();
  return {r.lhs < 1e-3 && d8 < 0.02,
          fmt::format("max reconstruction error {:.2e}, T=8 distance to f (mean removed) {:.2f}%", r.lhs, 100 * d8)};
}

Line core_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  int n = 0, failed = 0;
  double worst = INFINITY;
  std::string where;
  for (double a : {1.3, 1.5, 1.8}) {
    const std::vector<std::pair<std::string, StableModel>> models{
        {"product d=1", product_model(a, {1.0})},
        {"product d=2", product_model(a, {1.0, 0.7})},
        {"rotational d=2", rotational_model(a, 2)}};
    for (const auto& [name, m] : models) {
      const Grid g = m.dim() == 1 ? Grid(1, 1024, 16) : Grid(2, 128, 8);
      CheckInputs in;
      in.seed = 7;
      for (const auto& r : run_suite("core", m, g, in)) {
        ++n;
        if (r.verdict == Verdict::Fail) {
          ++failed;
          where += fmt::format(" {}@{},a={}", r.name, name, a);
        }
        if (r.verdict == Verdict::Pass && r.margin_kind == "relative" && r.tolerance == 0)
          worst = std::min(worst, r.margin);
      }
    }
  }
  const double dt = seconds_since(t0);
  return {failed == 0 && dt < 900,
          fmt::format("{} reports, {} failed{}; smallest inequality margin {:.3f}; {:.0f} s", n, failed, where, worst, dt)};
}

Line asymptotics() {
  const Grid g(2, 128, 8);
  const Field f = gaussian_bump(g, 1.0);
  const auto m = product_model(1.5, {1.0, 0.7});
  auto t0 = std::chrono::steady_clock::now();
  const auto b = asymptotic_study("BBM", m, f, {1.5, 1.7, 1.8, 1.9, 1.95, 1.98, 1.99});
  const double tb = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto s = asymptotic_study("MS", m, f, {1.5, 1.3, 1.2, 1.1, 1.05, 1.02, 1.01, 1.005});
  const double ts = seconds_since(t0);
  const bool ok = b.monotone && b.final_over_initial < 0.1 && s.monotone && s.final_over_initial < 1e-2 &&
                  tb < 120 && ts < 120;
  return {ok, fmt::format("BBM final/initial {:.4f} (monotone {}), MS final/initial {:.4f} (monotone {})",
                          b.final_over_initial, b.monotone, s.final_over_initial, s.monotone)};
}

Line optimizer_line() {
  const auto m = rotational_model(1.5, 2);
  std::vector<double> S;
  bool monotone = true;
  double el = 0;
  for (int N : {128, 256, 512}) {
    const auto r = minimize_sobolev(m, Grid(2, N, 8), 2.0);
    for (const auto& s : r.starts)
      for (std::size_t i = 1; i < s.history.size(); ++i) monotone = monotone && s.history[i] < s.history[i - 1];
    S.push_back(r.S_estimate);
    el = std::max(el, r.el_residual);
  }
  const double c1 = std::abs(S[1] - S[0]) / S[1], c2 = std::abs(S[2] - S[1]) / S[2];
  const bool nonincreasing = S[1] <= S[0] * (1 + 1e-4) && S[2] <= S[1] * (1 + 1e-4);

  const Grid g(2, 128, 8);
  OptimizeOptions o;
  o.initial = gaussian_bump(g, 1.0);
  const double a = minimize_sobolev(m, g, 2.0, o).S_estimate;
  o.initial = gaussian_bump(g, 1.0, {5 * g.h(), -3 * g.h()});
  const double b = minimize_sobolev(m, g, 2.0, o).S_estimate;
  const double tr = std::abs(a - b) / a;

  return {monotone && tr < 1e-6 && nonincreasing && c1 < 0.01 && c2 < 0.01 && el < 1e-3,
          fmt::format("S(128,256,512) = {:.6f}, {:.6f}, {:.6f}; Cauchy {:.3f}%, {:.3f}%; translation {:.1e}; "
                      "EL residual {:.1e}; trace monotone {}",
                      S[0], S[1], S[2], 100 * c1, 100 * c2, tr, el, monotone)};
}

Line engine() {
  double rt = 0, law = 0, mass = 0, contr = -INFINITY, comm = 0, adj = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const Grid g(2, 64, 6);
    const auto m = seed % 2 ? product_model(1.3 + 0.02 * seed, {1.0, 0.6}) : rotational_model(1.2 + 0.03 * seed, 2);
    const auto fam = default_family(g, seed);
    Field noise(g);
    for (auto& v : noise.v) v = nd(rng);
    const Field& f = fam[6].f;
    const Field& h = fam[7].f;
    rt = std::max(rt, lp_norm(inverse_fourier(fourier(noise)) - noise, 2) / lp_norm(noise, 2));
    const double s = 0.05 + 0.1 * (seed % 3), t = 0.2;
    law = std::max(law, lp_norm(semigroup(m, semigroup(m, f, s), t) - semigroup(m, f, s + t), 2) / lp_norm(f, 2));
    const Field pos = hadamard(noise, noise);
    mass = std::max(mass, std::abs(integral(semigroup(m, pos, t)) / integral(pos) - 1));
    for (double p : {1.0, 1.5, 2.0, 4.0})
      contr = std::max(contr, lp_norm(semigroup(m, noise, t), p) / lp_norm(noise, p) - 1);
    contr = std::max(contr, sup_abs(semigroup(m, noise, t)) / sup_abs(noise) - 1);
    const VectorField a1 = frac_gradient(m, semigroup(m, f, t));
    const VectorField a2 = frac_gradient(m, f);
    for (int k = 0; k < 2; ++k)
      comm = std::max(comm, lp_norm(a1.component(k) - semigroup(m, a2.component(k), t), 2) / lp_norm(a2, 2));
    adj = std::max(adj, std::abs(inner(semigroup(m, f, t), h) - inner(f, semigroup(m, h, t))) /
                            (lp_norm(f, 2) * lp_norm(h, 2)));
  }
  const bool ok = rt < 1e-10 && law < 1e-12 && mass < 1e-12 && contr <= 1e-12 && comm < 1e-12 && adj < 1e-12;
  return {ok, fmt::format("20 seeds: round-trip {:.1e}, semigroup law {:.1e}, mass {:.1e}, contraction excess {:.1e}, "
                          "commutation {:.1e}, self-adjointness {:.1e}",
                          rt, law, mass, contr, comm, adj)};
}

Line volume_oracle() {
  const double exact = *volume_exact(LqBall{1.5, 1, {}}, 2);
  const double closed = 4 * std::pow(std::tgamma(1 + 1 / 1.5), 2) / std::tgamma(1 + 2 / 1.5);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1, 1);
  const long n = 10'000'000;
  long hit = 0;
  for (long i = 0; i < n; ++i) {
    const double x = u(rng), y = u(rng);
    hit += std::pow(std::abs(x), 1.5) + std::pow(std::abs(y), 1.5) <= 1;
  }
  const double ph = static_cast<double>(hit) / n, est = 4 * ph, se = 4 * std::sqrt(ph * (1 - ph) / n);
  const double z = std::abs(est - exact) / se;
  return {z < 3 && std::abs(exact - closed) < 1e-12,
          fmt::format("area {:.6f}, Monte Carlo {:.6f} +- {:.6f} ({:.2f} sd)", exact, est, se, z)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Line()>>> criteria{
      {"rectangle perimeter closed form", rectangle_perimeter},
      {"heat-content slope, rectangle", rectangle_slope},
      {"heat-content slope, disc and Gaussian endpoint", disc_slopes},
      {"stable moments and density", moments_line},
      {"composition identity", composition},
      {"FFTC reconstruction", fftc_line},
      {"core inequality suite", core_suite},
      {"BBM and MS asymptotics", asymptotics},
      {"Sobolev optimizer", optimizer_line},
      {"engine properties", engine},
      {"volume oracle", volume_oracle},
  };
  int failed = 0, k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Line l;
    try {
      l = fn();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    failed += !l.pass;
    fmt::print("{} {:2d} {}: {}\n", l.pass ? "PASS" : "FAIL", k, name, l.detail);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
