#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "stablefrac/digest.hpp"
#include "stablefrac/errors.hpp"
#include "stablefrac/families.hpp"
#include "stablefrac/verifier.hpp"

using namespace sf;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::BadSpec;
}

}  // namespace

TEST_CASE("registry and suites") {
  const auto& names = registry_names();
  CHECK(names.size() == 22);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  const auto core = suite_entries("core");
  CHECK(core.size() == 13);
  for (const auto& c : core) CHECK(std::find(names.begin(), names.end(), c) != names.end());
  CHECK(suite_entries("all") == names);
  CHECK(kind_of([] { suite_entries("most"); }) == ErrorKind::UnknownCheck);
}

TEST_CASE("unknown and unsupported checks") {
  const Grid g(2, 32, 6);
  const auto dm = make_model(1.5, 2, axis_power_density(0.2, {1.0, 0.5}, 2.0));
  CHECK(kind_of([&] { evaluate_inequality("no_such_check", dm, g, {}); }) == ErrorKind::UnknownCheck);
  CHECK(kind_of([&] { evaluate_inequality("riesz_sigma_bound", dm, g, {}); }) == ErrorKind::UnsupportedModelForCheck);
}

TEST_CASE("dimension-restricted entries are skipped in one dimension") {
  const Grid g(1, 256, 12);
  const auto m = product_model(1.5, {1.0});
  const auto r = evaluate_inequality("lorentz_hardy_identity", m, g, {});
  CHECK(r.verdict == Verdict::Skipped);
}

TEST_CASE("core suite passes on the one-dimensional model") {
  const Grid g(1, 1024, 16);
  const auto m = product_model(1.5, {1.0});
  CheckInputs in;
  in.seed = 7;
  const auto reps = run_suite("core", m, g, in);
  CHECK(reps.size() == 13);
  for (const auto& r : reps) {
    INFO(r.name, " margin ", r.margin);
    CHECK(r.verdict != Verdict::Fail);
    CHECK(!r.digest.empty());
  }
  CHECK(all_passed(reps));
}

TEST_CASE("composition identity holds to roundoff") {
  const Grid g(2, 128, 8);
  for (auto [a, b] : {std::pair{1.4, 1.3}, std::pair{1.9, 1.1}}) {
    CheckInputs in;
    in.beta = b;
    const auto r = evaluate_inequality("composition_rot", rotational_model(a, 2), g, in);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.lhs < 1e-10);
  }
}

TEST_CASE("report digests are deterministic and seed-dependent") {
  const Grid g(2, 64, 8);
  const auto m = product_model(1.5, {0.5, 0.5});
  CheckInputs in;
  in.seed = 3;
  const auto a = evaluate_inequality("pseudo_poincare_frac", m, g, in);
  const auto b = evaluate_inequality("pseudo_poincare_frac", m, g, in);
  CHECK(a.digest == b.digest);
  CHECK(a.to_json().dump() == b.to_json().dump());
  in.seed = 4;
  CHECK(evaluate_inequality("pseudo_poincare_frac", m, g, in).digest != a.digest);
}

TEST_CASE("Pichorides constant") {
  CHECK(pichorides_constant(2) == doctest::Approx(1.0));
  for (double p : {1.2, 1.5, 3.0}) {
    const double q = p / (p - 1);
    CHECK(pichorides_constant(p) == doctest::Approx(pichorides_constant(q)).epsilon(1e-12));
    CHECK(pichorides_constant(p) > 1);
  }
}

TEST_CASE("fixed-sigma alpha change keeps the spherical measure") {
  const auto p = product_model(1.5, {0.5, 0.25});
  const auto q = with_alpha_fixed_sigma(p, 1.9);
  const auto P = p.sigma_matrix(), Q = q.sigma_matrix();
  for (size_t i = 0; i < P.size(); ++i) CHECK(Q[i] == doctest::Approx(P[i]).epsilon(1e-12));
}

TEST_CASE("asymptotic study validates its inputs") {
  const Grid g(2, 32, 6);
  const Field f = gaussian_bump(g, 1.0);
  const auto m = product_model(1.5, {0.5, 0.5});
  CHECK_THROWS_AS(asymptotic_study("BBM", m, f, {1.5, 1.7, 1.9}), Error);
  CHECK_THROWS_AS(asymptotic_study("XYZ", m, f, {1.5, 1.6, 1.7, 1.8, 1.9}), Error);
}

TEST_CASE("BBM error decays along alpha -> 2") {
  const Grid g(2, 128, 8);
  const Field f = gaussian_bump(g, 1.0);
  const auto s = asymptotic_study("BBM", product_model(1.5, {1.0, 0.7}), f, {1.5, 1.7, 1.8, 1.9, 1.95, 1.98, 1.99});
  CHECK(s.monotone);
  CHECK(s.final_over_initial < 0.1);
  CHECK(s.verdict == Verdict::Pass);
}

TEST_CASE("Sobolev spread diagnostic is consistent with its verdict") {
  const Grid g(2, 64, 8);
  for (double a : {1.3, 1.8}) {
    const auto r = evaluate_inequality("frac_sobolev", product_model(a, {0.5, 0.5}), g, {});
    if (r.verdict == Verdict::Skipped) continue;
    CHECK(r.details.is_array());
    CHECK(std::isfinite(r.constant));
  }
}
