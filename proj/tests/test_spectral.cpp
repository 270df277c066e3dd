#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "stablefrac/families.hpp"
#include "stablefrac/spectral.hpp"
#include "stablefrac/stable_model.hpp"

using namespace sf;

namespace {

std::vector<StableModel> models2() {
  return {product_model(1.5, {0.5, 0.5}), rotational_model(1.5, 2),
          make_model(1.4, 2, axis_power_density(0.2, {1.0, 0.5}, 2.0))};
}

Field random_field(const Grid& g, std::uint64_t seed) { return default_family(g, seed)[6].f; }

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_CASE("Fourier round trip") {
  const Grid g(2, 64, 6);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Field f = random_field(g, s);
    CHECK(sup_abs(inverse_fourier(fourier(f)) - f) <= 1e-12 * sup_abs(f));
  }
}

TEST_CASE("semigroup law, mass conservation and L^p contraction") {
  const Grid g(2, 64, 6);
  for (const auto& m : models2()) {
    for (std::uint64_t s = 0; s < 4; ++s) {
      const Field f = random_field(g, s);
      const Field a = semigroup(m, semigroup(m, f, 0.2), 0.35);
      const Field b = semigroup(m, f, 0.55);
      CHECK(sup_abs(a - b) <= 1e-12 * sup_abs(f));
      const Field bump = gaussian_bump(g, 0.8);
      CHECK(rel(integral(semigroup(m, bump, 0.7)), integral(bump)) < 1e-12);
      for (double p : {1.0, 2.0, 4.0})
        CHECK(lp_norm(semigroup(m, bump, 0.3), p) <= lp_norm(bump, p) * (1 + 1e-12));
    }
  }
}

TEST_CASE("semigroup commutes with the generator and is self-adjoint") {
  const Grid g(2, 48, 6);
  for (const auto& m : models2()) {
    const Field f = random_field(g, 1), h = random_field(g, 2);
    const Field a = semigroup(m, generator(m, f), 0.4);
    const Field b = generator(m, semigroup(m, f, 0.4));
    CHECK(sup_abs(a - b) <= 1e-10 * sup_abs(generator(m, f)));
    CHECK(rel(inner(semigroup(m, f, 0.3), h), inner(f, semigroup(m, h, 0.3))) < 1e-12);
  }
}

TEST_CASE("generator is the derivative of the semigroup at zero") {
  const Grid g(2, 48, 6);
  const auto m = rotational_model(1.6, 2);
  const Field f = gaussian_bump(g, 1.0);
  const double t = 1e-6;
  const Field fd = (1 / t) * (semigroup(m, f, t) - f);
  CHECK(sup_abs(fd - generator(m, f)) <= 1e-4 * sup_abs(generator(m, f)));
}

TEST_CASE("fractional divergence is minus the adjoint of the fractional gradient") {
  const Grid g(2, 48, 6);
  for (const auto& m : models2()) {
    const Field f = random_field(g, 3);
    VectorField w(g);
    w.c[0] = gaussian_bump(g, 1.0, {0.5, 0.0}).v;
    w.c[1] = random_field(g, 4).v;
    const VectorField Df = frac_gradient(m, f);
    double lhs = 0;
    for (int k = 0; k < 2; ++k) lhs += inner(w.component(k), Df.component(k));
    CHECK(rel(lhs, -inner(frac_divergence(m, w), f)) < 1e-10);
  }
}

TEST_CASE("carre du champ integrates to the Dirichlet form") {
  const Grid g(2, 64, 6);
  for (const auto& m : models2()) {
    const Field f = gaussian_bump(g, 1.0, {0.3, -0.2});
    const Field gl = gradient_length(m, f);
    CHECK(rel(integral(hadamard(gl, gl)), -2 * inner(f, generator(m, f))) < 1e-6);
  }
}

TEST_CASE("local gradient of a Gaussian") {
  const Grid g(2, 64, 8);
  const Field f = gaussian_bump(g, 1.0);
  const VectorField D = local_gradient(f);
  const Field ex = sample(g, [](const double* x) { return -x[0] * std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2); });
  CHECK(sup_abs(D.component(0) - ex) < 1e-10);
}

TEST_CASE("Euclidean length of the fractional gradient for the canonical model") {
  // tau = alpha |xi|^(alpha-2) xi / 2 when sigma_alpha^alpha = |xi|^alpha / 2
  const Grid g(2, 64, 6);
  const double a = 1.5;
  const auto m = rotational_model(a, 2);
  const Field f = gaussian_bump(g, 1.0);
  const VectorField D = frac_gradient(m, f);
  const auto ref = apply_vector_multiplier(f, [a](const double* xi, cplx* out) {
    const double r = std::hypot(xi[0], xi[1]);
    for (int k = 0; k < 2; ++k) out[k] = r > 0 ? cplx(0, a / 2 * std::pow(r, a - 2) * xi[k]) : cplx(0);
  });
  CHECK(sup_abs(D.component(0) - ref.component(0)) < 1e-12);
  CHECK(sup_abs(D.component(1) - ref.component(1)) < 1e-12);
}

TEST_CASE("norms") {
  const Grid g(1, 256, 4);
  const Field one(g, 1.0);
  CHECK(lp_norm(one, 2) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
  CHECK(functional_norm(one, NormSpec::sup()) == doctest::Approx(1.0));
  // weak L^q of an indicator: |A|^(1/q)
  const Field ind = sample(g, [](const double* x) { return std::abs(x[0]) < 1 ? 1.0 : 0.0; });
  CHECK(functional_norm(ind, NormSpec::weak(3)) == doctest::Approx(std::cbrt(integral(ind))).epsilon(1e-9));
  // L^{p,p} = L^p
  const Field f = gaussian_bump(g, 0.7);
  CHECK(functional_norm(f, NormSpec::lorentz(2.5, 2.5)) == doctest::Approx(lp_norm(f, 2.5)).epsilon(2e-3));
  CHECK(functional_norm(f, NormSpec::lp(1.5)) == doctest::Approx(lp_norm(f, 1.5)));
}

TEST_CASE("up- and downsampling are exact for band-limited fields") {
  const Grid g(2, 32, 6);
  const Field f = random_field(g, 5);
  CHECK(sup_abs(downsample2(upsample2(f)) - f) < 1e-12 * sup_abs(f));
}

TEST_CASE("Gaussian semigroup matches the heat kernel convolution of a Gaussian") {
  const Grid g(1, 256, 10);
  const Field f = gaussian_bump(g, 1.0);
  const double t = 0.5;  // exp(-t xi^2): variance grows by 2t
  const double s2 = 1 + 2 * t;
  const Field ex = sample(g, [s2](const double* x) { return std::exp(-x[0] * x[0] / (2 * s2)) / std::sqrt(s2); });
  CHECK(sup_abs(gaussian_semigroup(f, t) - ex) < 1e-10);
}
