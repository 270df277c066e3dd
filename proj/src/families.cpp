#include "stablefrac/families.hpp"

#include <cmath>
#include <random>

namespace sf {

namespace {

// Real trigonometric polynomial with modes |m_k| <= M and Gaussian-weighted normal
// coefficients, mean zero, scaled to unit L2 norm on the torus.
struct BandLimited {
  std::vector<std::vector<int>> modes;
  std::vector<double> a, b;
  double L = 1, scale = 1;

  BandLimited(int d, double l, std::mt19937_64& rng, int M = 6) : L(l) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<int> m(d, -M);
    // half of the lattice: first nonzero entry positive
    while (true) {
      int first = 0;
      for (int k = 0; k < d; ++k)
        if (m[k] != 0) {
          first = m[k];
          break;
        }
      if (first > 0) {
        double r2 = 0;
        for (int v : m) r2 += v * v;
        const double w = std::exp(-r2 / 8.0);
        modes.push_back(m);
        a.push_back(w * nd(rng));
        b.push_back(w * nd(rng));
      }
      int k = d - 1;
      while (k >= 0 && m[k] == M) m[k--] = -M;
      if (k < 0) break;
      ++m[k];
    }
    double s2 = 0;
    for (size_t i = 0; i < a.size(); ++i) s2 += a[i] * a[i] + b[i] * b[i];
    // each cos/sin mode has mean square 1/2 over the torus of volume (2L)^d
    scale = 1 / std::sqrt(s2 / 2 * std::pow(2 * L, d));
  }

  double operator()(const double* x, const std::vector<double>& shift) const {
    double v = 0;
    const double k0 = M_PI / L;
    for (size_t i = 0; i < modes.size(); ++i) {
      double ph = 0;
      for (size_t k = 0; k < modes[i].size(); ++k) ph += modes[i][k] * k0 * (x[k] - shift[k]);
      v += a[i] * std::cos(ph) + b[i] * std::sin(ph);
    }
    return scale * v;
  }
};

double r2_from(const double* x, int d, const std::vector<double>& c) {
  double r2 = 0;
  for (int k = 0; k < d; ++k) {
    const double y = x[k] - (c.empty() ? 0.0 : c[k]);
    r2 += y * y;
  }
  return r2;
}

}  // namespace

Field gaussian_bump(const Grid& g, double s, const std::vector<double>& c) {
  const int d = g.dim;
  return sample(g, [&](const double* x) { return std::exp(-r2_from(x, d, c) / (2 * s * s)); });
}

std::vector<TestFunction> default_family(const Grid& g, std::uint64_t seed) {
  const int d = g.dim;
  std::vector<TestFunction> out;
  out.push_back({"bump_0.5", gaussian_bump(g, 0.5)});
  out.push_back({"bump_1", gaussian_bump(g, 1.0)});
  out.push_back({"bump_1.5", gaussian_bump(g, 1.5)});
  out.push_back({"product_bump", sample(g, [&](const double* x) {
                   double v = 1;
                   for (int k = 0; k < d; ++k) {
                     const double s = 0.6 * std::pow(1.5, k);
                     v *= std::exp(-x[k] * x[k] / (2 * s * s));
                   }
                   return v;
                 })});
  std::vector<double> c1(d, 0.4);
  out.push_back({"bump_with_spike", sample(g, [&](const double* x) {
                   return std::exp(-r2_from(x, d, {}) / 2) * (1 + std::exp(-r2_from(x, d, c1) / (2 * 0.09)));
                 })});
  out.push_back({"smoothed_indicator", sample(g, [&](const double* x) {
                   double v = 1;
                   for (int k = 0; k < d; ++k)
                     v *= 0.5 * (std::erf((x[k] + 1.5) / 0.25) - std::erf((x[k] - 1.5) / 0.25));
                   return v;
                 })});
  std::mt19937_64 rng(seed);
  const BandLimited r1(d, g.L, rng), r2(d, g.L, rng);
  const std::vector<double> zero(d, 0.0);
  out.push_back({"random_1", sample(g, [&](const double* x) { return r1(x, zero); })});
  out.push_back({"random_2", sample(g, [&](const double* x) { return r2(x, zero); })});
  std::vector<double> shift(d);
  for (int k = 0; k < d; ++k) shift[k] = (k % 2 ? -1 : 1) * 0.1 * g.L;
  out.push_back({"bump_1_translated", gaussian_bump(g, 1.0, shift)});
  out.push_back({"random_1_translated", sample(g, [&](const double* x) { return r1(x, shift); })});
  return out;
}

}  // namespace sf
