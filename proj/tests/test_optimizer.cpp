#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "stablefrac/errors.hpp"
#include "stablefrac/families.hpp"
#include "stablefrac/optimizer.hpp"

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

nlohmann::json golden() {
  std::ifstream is(std::string(STABLEFRAC_TEST_DATA) + "/golden/rayleigh_quotient.json");
  REQUIRE(is.good());
  return nlohmann::json::parse(is);
}

}  // namespace

TEST_CASE("Sobolev exponent") {
  CHECK(sobolev_exponent(2, 2, 1.5) == doctest::Approx(4.0));
  CHECK(sobolev_exponent(1.5, 3, 1.2) == doctest::Approx(4.5 / 2.7));
}

TEST_CASE("quotient is scale invariant") {
  const Grid g(2, 128, 8);
  const auto m = rotational_model(1.5, 2);
  const Field f = gaussian_bump(g, 1.0, {0.2, 0.1});
  const double q = rayleigh_quotient(m, f, 2);
  for (double c : {1e-3, 0.5, 7.0, -2.0}) CHECK(std::abs(rayleigh_quotient(m, c * f, 2) / q - 1) < 1e-12);
}

TEST_CASE("quotient errors") {
  const Grid g(2, 32, 8);
  const auto m = rotational_model(1.5, 2);
  const Field f = gaussian_bump(g, 1.0);
  CHECK(kind_of([&] { rayleigh_quotient(m, f, 1.0); }) == ErrorKind::BadExponents);
  CHECK(kind_of([&] { rayleigh_quotient(m, f, 4.0); }) == ErrorKind::BadExponents);
  CHECK(kind_of([&] { rayleigh_quotient(m, Field(g, 0.0), 2); }) == ErrorKind::ZeroField);
}

TEST_CASE("quotient is nearly dilation invariant on a fine grid") {
  const Grid g(2, 512, 8);
  const auto m = rotational_model(1.5, 2);
  const double q = rayleigh_quotient(m, gaussian_bump(g, 1.0), 2);
  for (double s : {0.8, 1.25}) CHECK(std::abs(rayleigh_quotient(m, gaussian_bump(g, s), 2) / q - 1) < 0.02);
}

TEST_CASE("quotient is translation invariant") {
  const Grid g(2, 256, 8);
  const auto m = product_model(1.5, {0.5, 0.3});
  const double h = g.h();
  const double q0 = rayleigh_quotient(m, gaussian_bump(g, 1.0), 2);
  const double q1 = rayleigh_quotient(m, gaussian_bump(g, 1.0, {5 * h, -3 * h}), 2);
  CHECK(std::abs(q1 / q0 - 1) < 1e-10);
}

TEST_CASE("golden quotient of the unit bump") {
  const auto j = golden();
  const auto m = rotational_model(j.at("alpha").get<double>(), 2);
  const double p = j.at("p").get<double>();
  const int N = j.at("N").get<int>();
  const double L = j.at("L").get<double>();
  const double q = rayleigh_quotient(m, gaussian_bump(Grid(2, N, L), 1.0), p);
  CHECK(q == doctest::Approx(j.at("Q_grid").get<double>()).epsilon(1e-10));
  // doubling the box at fixed h cuts the O((pi/L)^3) error by 8
  const double q2 = rayleigh_quotient(m, gaussian_bump(Grid(2, 2 * N, 2 * L), 1.0), p);
  CHECK((8 * q2 - q) / 7 == doctest::Approx(j.at("Q_closed_form").get<double>()).epsilon(1e-4));
}

TEST_CASE("flow decreases the quotient and reaches a critical point") {
  const Grid g(2, 128, 8);
  const auto m = rotational_model(1.5, 2);
  OptimizeOptions o;
  o.widths = {1.0 / 8};
  const auto r = minimize_sobolev(m, g, 2, o);
  const auto& h = r.best.history;
  REQUIRE(h.size() >= 2);
  for (size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1] * (1 + 1e-14));
  CHECK(r.S_estimate < rayleigh_quotient(m, gaussian_bump(g, 1.0), 2));
  CHECK(r.el_residual < 1e-3);
  const auto js = r.to_json();
  CHECK(js.contains("S_estimate"));
}

TEST_CASE("refinement 128 -> 256 moves the estimate by less than 1%") {
  const auto m = rotational_model(1.5, 2);
  OptimizeOptions o;
  o.widths = {1.0 / 8};
  const double a = minimize_sobolev(m, Grid(2, 128, 8), 2, o).S_estimate;
  const double b = minimize_sobolev(m, Grid(2, 256, 8), 2, o).S_estimate;
  CHECK(std::abs(a - b) / b < 0.01);
}

TEST_CASE("rotation-invariant minimizer is radially symmetric") {
  const Grid g(2, 128, 8);
  const auto m = rotational_model(1.5, 2);
  OptimizeOptions o;
  o.widths = {1.0 / 8};
  const auto r = minimize_sobolev(m, g, 2, o);
  const double q = r.S_estimate;
  const double qs = rayleigh_quotient(m, project_flow_modes(radial_average(r.best.f)), 2);
  INFO("Q = ", q, ", Q(symmetrized) = ", qs);
  CHECK(std::abs(qs - q) / q <= 1e-4);
}

TEST_CASE("a line search that cannot start stalls") {
  const Grid g(2, 64, 8);
  OptimizeOptions o;
  o.min_step = 10;
  CHECK(kind_of([&] { run_flow(rotational_model(1.5, 2), gaussian_bump(g, 1.0), 2, o); }) == ErrorKind::Stalled);
}

TEST_CASE("trace csv") {
  FlowState s;
  s.history = {2.0, 1.5};
  s.steps = {0.0, 0.5};
  const auto path = std::filesystem::temp_directory_path() / "stablefrac_trace_test.csv";
  write_trace_csv(s, path.string());
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line == "iteration,Q,step");
  std::getline(is, line);
  CHECK(line.rfind("0,2", 0) == 0);
  std::filesystem::remove(path);
}
