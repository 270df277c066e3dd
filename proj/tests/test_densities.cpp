#include <doctest.h>

#include <cmath>
#include <numbers>

#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_gamma.h>

#include "stablefrac/densities.hpp"
#include "stablefrac/stable_model.hpp"

using namespace sf;

namespace {

constexpr double kPi = std::numbers::pi;

struct Params {
  double alpha, x;
  int which;  // 0: cos transform, 1: sin transform of xi e^{-xi^a}, 2: J0 Hankel, 3: 3d radial
};

double integrand(double s, void* vp) {
  const auto* p = static_cast<Params*>(vp);
  const double e = std::exp(-std::pow(s, p->alpha));
  switch (p->which) {
    case 0: return std::cos(p->x * s) * e;
    case 1: return s * std::sin(p->x * s) * e;
    case 2: return s * gsl_sf_bessel_J0(p->x * s) * e;
    default: return s * std::sin(p->x * s) * e;
  }
}

// Finite-interval adaptive quadrature; e^{-s^a} is below 1e-40 beyond the cutoff.
double transform(double alpha, double x, int which) {
  Params p{alpha, x, which};
  gsl_function F{&integrand, &p};
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(4000);
  double r, err;
  const double cut = std::pow(95.0, 1 / alpha);
  gsl_integration_qag(&F, 0, cut, 1e-14, 1e-12, 4000, GSL_INTEG_GAUSS61, w, &r, &err);
  gsl_integration_workspace_free(w);
  return r;
}

}  // namespace

TEST_CASE("one-dimensional density against the Fourier inversion integral") {
  for (double a : {1.2, 1.5, 1.8}) {
    for (double x : {0.0, 0.3, 1.0, 2.5, 7.0}) {
      CHECK(density_1d(a, x) == doctest::Approx(transform(a, x, 0) / kPi).epsilon(1e-8));
      if (x > 0) CHECK(density_1d_deriv(a, x) == doctest::Approx(-transform(a, x, 1) / kPi).epsilon(1e-7));
    }
  }
}

TEST_CASE("radial densities against Hankel transforms") {
  for (double a : {1.3, 1.7}) {
    for (double r : {0.2, 1.0, 3.0}) {
      CHECK(radial_density(a, 2, r) == doctest::Approx(transform(a, r, 2) / (2 * kPi)).epsilon(1e-7));
      CHECK(radial_density(a, 3, r) == doctest::Approx(transform(a, r, 3) / (2 * kPi * kPi * r)).epsilon(1e-7));
    }
  }
}

TEST_CASE("closed-form values of the standard law") {
  const double e = abs_moment_quadrature(1.5, 1.0);
  CHECK(std::abs(e / (2 * gsl_sf_gamma(1.0 / 3) / kPi) - 1) < 1e-4);
  CHECK(std::abs(density_1d_mass(1.5) - 1) < 1e-6);
  CHECK(std::abs(density_1d(1.5, 0) - gsl_sf_gamma(5.0 / 3) / kPi) < 1e-6);
}

TEST_CASE("absolute moments against the gamma formula") {
  for (double a : {1.2, 1.5, 1.9}) {
    for (double p : {0.5, 1.0, 1.1}) {
      const double ref = std::pow(2.0, p) * gsl_sf_gamma((1 + p) / 2) * gsl_sf_gamma(1 - p / a) /
                         (std::sqrt(kPi) * gsl_sf_gamma(1 - p / 2));
      CHECK(abs_moment(a, p) == doctest::Approx(ref).epsilon(1e-12));
      CHECK(abs_moment_quadrature(a, p) == doctest::Approx(ref).epsilon(1e-4));
    }
  }
}

TEST_CASE("gradient L1 norm of a unimodal one-dimensional density is 2 p(0)") {
  for (double a : {1.3, 1.6}) {
    const auto m = product_model(a, {0.35});
    CHECK(grad_density_l1(m) == doctest::Approx(2 * density_sup(m)).epsilon(1e-6));
  }
}

TEST_CASE("density fast paths agree with the cone representation") {
  const auto r = rotational_model(1.5, 2);
  const auto p = product_model(1.5, {0.5, 0.3});
  for (const auto& m : {r, p}) {
    for (auto x : {std::array<double, 2>{0.4, -0.2}, std::array<double, 2>{1.5, 0.9}}) {
      CHECK(density_cone(m, x.data()) == doctest::Approx(density_point(m, x.data())).epsilon(1e-6));
      double g1[2], g2[2];
      density_grad(m, x.data(), g1);
      density_cone_grad(m, x.data(), g2);
      CHECK(g2[0] == doctest::Approx(g1[0]).epsilon(1e-5));
      CHECK(g2[1] == doctest::Approx(g1[1]).epsilon(1e-5));
    }
  }
}

TEST_CASE("product density factorizes over the axes") {
  const auto m = product_model(1.5, {0.5, 0.5});
  for (auto x : {std::array<double, 2>{0.0, 0.0}, std::array<double, 2>{0.7, -1.9}, std::array<double, 2>{3.0, 0.2}})
    CHECK(density_point(m, x.data()) == doctest::Approx(density_1d(1.5, x[0]) * density_1d(1.5, x[1])).epsilon(1e-5));
}

TEST_CASE("density point at the origin is the supremum") {
  const auto r = rotational_model(1.4, 2);
  const double o[2] = {0, 0};
  CHECK(density_sup(r) == doctest::Approx(density_point(r, o)).epsilon(1e-12));
}

TEST_CASE("moments report keys") {
  const auto j = moments(product_model(1.5, {0.5, 0.5}), {1.5, 2.0});
  for (const char* k : {"E_abs_Y", "E_abs_Y_quadrature", "radial_mean", "p_sup", "grad_p_L1", "logderiv_Lp"})
    CHECK(j.contains(k));
}
