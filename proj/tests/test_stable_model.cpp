#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_gamma.h>

#include "stablefrac/errors.hpp"
#include "stablefrac/stable_model.hpp"
#include "stablefrac/verifier.hpp"

using namespace sf;

namespace {

constexpr double kPi = std::numbers::pi;

// (1/2pi) int_0^{2pi} |cos t|^p dt by adaptive quadrature.
double circle_moment(double p) {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
  gsl_function F;
  F.function = [](double t, void* pp) { return std::pow(std::abs(std::cos(t)), *static_cast<double*>(pp)); };
  F.params = &p;
  double r, err;
  const double pts[] = {0, kPi / 2, 3 * kPi / 2, 2 * kPi};
  gsl_integration_qagp(&F, const_cast<double*>(pts), 4, 0, 1e-13, 1000, w, &r, &err);
  gsl_integration_workspace_free(w);
  return r / (2 * kPi);
}

StableModel skew_discrete(double a) {
  DiscreteSpec s;
  const double c = std::cos(0.4), sn = std::sin(0.4);
  s.atoms = {{{1, 0}, 0.3}, {{c, sn}, 0.5}, {{0, 1}, 0.2}};
  return make_model(a, 2, s);
}

std::vector<StableModel> zoo(double a) {
  return {product_model(a, {0.5, 0.5}), rotational_model(a, 2), skew_discrete(a),
          make_model(a, 2, axis_power_density(0.2, {1.0, 0.5}, 2.0)), product_model(a, {0.7, 0.4, 0.9}),
          rotational_model(a, 3)};
}

}  // namespace

TEST_CASE("c_alpha matches the gamma-function expression") {
  for (double a : {1.1, 1.5, 1.9}) {
    const double ref = -std::cos(a * kPi / 2) * gsl_sf_gamma(2 - a) / (a * (a - 1));
    CHECK(c_alpha(a) == doctest::Approx(ref).epsilon(1e-14));
  }
  // endpoint behaviour used by the asymptotic studies
  CHECK((2 - 1.9999) * c_alpha(1.9999) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(c_alpha(1.0001) == doctest::Approx(kPi / 2).epsilon(1e-3));
}

TEST_CASE("rotation-invariant symbol against circle quadrature") {
  for (double a : {1.2, 1.5, 1.8}) {
    const double m = 0.7;
    const auto model = rotational_model_mass(a, 2, m);
    const double xi[2] = {0.3, -1.1};
    const double r = std::hypot(xi[0], xi[1]);
    CHECK(model.sigma_alpha_pow(xi) == doctest::Approx(c_alpha(a) * m * circle_moment(a) * std::pow(r, a)).epsilon(1e-10));
    const auto canon = rotational_model(a, 2);
    CHECK(canon.sigma_alpha(xi) == doctest::Approx(r / std::pow(2.0, 1 / a)).epsilon(1e-12));
    const auto c3 = rotational_model(a, 3);
    const double x3[3] = {0.2, 0.5, -0.4};
    CHECK(c3.sigma_alpha(x3) == doctest::Approx(std::sqrt(0.45) / std::pow(2.0, 1 / a)).epsilon(1e-12));
  }
  CHECK(sphere_abs_moment(3, 1.4) == doctest::Approx(1 / 2.4).epsilon(1e-14));
}

TEST_CASE("product symbol is a weighted sum over the axes") {
  const auto m = product_model(1.5, {0.5, 0.25});
  const double xi[2] = {2.0, -3.0};
  CHECK(m.is_product());
  CHECK(m.sigma_alpha_pow(xi) == doctest::Approx(std::pow(2.0, 1.5) + 0.5 * std::pow(3.0, 1.5)).epsilon(1e-14));
}

TEST_CASE("homogeneity, symmetry and the Euler identity for tau") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (double a : {1.3, 1.7}) {
    for (const auto& m : zoo(a)) {
      const int d = m.dim();
      for (int trial = 0; trial < 20; ++trial) {
        double xi[3], mx[3], tv[3];
        for (int k = 0; k < d; ++k) {
          xi[k] = nd(rng);
          mx[k] = -2.5 * xi[k];
        }
        CHECK(m.sigma_alpha(mx) == doctest::Approx(2.5 * m.sigma_alpha(xi)).epsilon(1e-11));
        m.tau_im(xi, tv);
        double dot = 0;
        for (int k = 0; k < d; ++k) dot += xi[k] * tv[k];
        CHECK(dot == doctest::Approx(a * m.sigma_alpha_pow(xi)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("tau is the gradient of sigma_alpha^alpha (central differences)") {
  for (const auto& m : zoo(1.6)) {
    const int d = m.dim();
    double xi[3] = {0.7, -0.4, 0.9}, tv[3];
    m.tau_im(xi, tv);
    for (int k = 0; k < d; ++k) {
      const double h = 1e-6;
      double a[3], b[3];
      for (int j = 0; j < d; ++j) a[j] = b[j] = xi[j];
      a[k] += h;
      b[k] -= h;
      CHECK(tv[k] == doctest::Approx((m.sigma_alpha_pow(a) - m.sigma_alpha_pow(b)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("m_sigma from the atoms directly") {
  const auto m = skew_discrete(1.4);
  const double xi[2] = {0.3, -0.8};
  double out[2];
  m.m_sigma_im(xi, out);
  double ref[2] = {0, 0};
  const double c = std::cos(0.4), s = std::sin(0.4);
  const std::vector<std::pair<std::array<double, 2>, double>> atoms{{{1, 0}, 0.3}, {{c, s}, 0.5}, {{0, 1}, 0.2}};
  for (const auto& [y, w] : atoms) {
    const double sg = (y[0] * xi[0] + y[1] * xi[1]) > 0 ? 1 : -1;
    // y and -y contribute the same vector
    for (int k = 0; k < 2; ++k) ref[k] += kPi / 2 * 2 * (w / c_alpha(1.4)) * y[k] * sg;
  }
  CHECK(out[0] == doctest::Approx(ref[0]).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(ref[1]).epsilon(1e-12));
}

TEST_CASE("sigma matrix") {
  const auto r = rotational_model_mass(1.5, 2, 3.0);
  const auto S = r.sigma_matrix();
  CHECK(S[0] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(S[3] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(std::abs(S[1]) < 1e-12);
  const auto p = product_model(1.5, {0.5, 0.25});
  const auto P = p.sigma_matrix();
  CHECK(P[0] == doctest::Approx(2 * 0.5 / c_alpha(1.5)).epsilon(1e-12));
  CHECK(P[3] == doctest::Approx(2 * 0.25 / c_alpha(1.5)).epsilon(1e-12));
}

TEST_CASE("constant density equals the rotation-invariant model of the same mass") {
  const auto dm = make_model(1.5, 2, axis_power_density(0.3, {0.0, 0.0}, 2.0));
  const auto rm = rotational_model_mass(1.5, 2, 0.3 * sphere_area(2));
  const double xi[2] = {1.2, 0.4};
  CHECK(dm.sigma_mass() == doctest::Approx(rm.sigma_mass()).epsilon(1e-10));
  CHECK(dm.sigma_alpha_pow(xi) == doctest::Approx(rm.sigma_alpha_pow(xi)).epsilon(1e-6));
}

TEST_CASE("with_alpha conventions") {
  const auto p = product_model(1.5, {0.5, 0.5});
  CHECK(p.with_alpha(1.8).axis_coeffs()[0] == doctest::Approx(1.0));
  const auto q = with_alpha_fixed_sigma(p, 1.8);
  CHECK(q.sigma_mass() == doctest::Approx(p.sigma_mass()).epsilon(1e-12));
  const auto r = rotational_model(1.5, 2);
  CHECK(with_alpha_fixed_sigma(r, 1.2).sigma_mass() == doctest::Approx(r.sigma_mass()).epsilon(1e-12));
  CHECK(r.with_alpha(1.2).rot_coeff() == doctest::Approx(0.5));
}

TEST_CASE("JSON round trip preserves the symbol") {
  for (const auto& m : {product_model(1.5, {0.5, 0.5}), rotational_model(1.3, 2), skew_discrete(1.7)}) {
    const auto back = model_from_json(m.to_json());
    const double xi[2] = {0.9, -0.2};
    CHECK(back.sigma_alpha_pow(xi) == doctest::Approx(m.sigma_alpha_pow(xi)).epsilon(1e-14));
    CHECK(back.to_json() == m.to_json());
  }
}

TEST_CASE("construction errors") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::BadSpec;  // unreachable in these cases
  };
  CHECK_THROWS_AS(product_model(2.0, {1.0}), Error);
  CHECK(kind_of([] { product_model(2.0, {1.0}); }) == ErrorKind::BadAlpha);
  CHECK(kind_of([] { product_model(1.0, {1.0}); }) == ErrorKind::BadAlpha);
  CHECK(kind_of([] {
          DiscreteSpec s;
          s.atoms = {{{1, 0}, 1.0}};
          make_model(1.5, 2, s);
        }) == ErrorKind::DegenerateMeasure);
  CHECK(kind_of([] {
          DiscreteSpec s;
          s.atoms = {{{1, 1}, 1.0}, {{0, 1}, 1.0}};
          make_model(1.5, 2, s);
        }) == ErrorKind::BadSpec);
  CHECK(kind_of([] {
          DensitySpec s;
          s.rho = [](const double* y) { return 1.0 + 0.5 * y[0]; };
          make_model(1.5, 2, s);
        }) == ErrorKind::AsymmetricMeasure);
}

TEST_CASE("nondegeneracy margin") {
  CHECK(rotational_model(1.5, 2).nondeg_margin() == doctest::Approx(0.5));
  const auto p = product_model(1.5, {0.5, 0.25});
  CHECK(p.nondeg_margin() > 0);
  CHECK(p.nondeg_margin() <= 0.5 + 1e-12);
}
