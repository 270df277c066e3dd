#include "stablefrac/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <stdexcept>

namespace sf {

namespace {

template <int N>
Rule gl_impl(double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  Rule r;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  // boost stores the nonnegative half; zero is present iff N is odd
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) {
      r.x.push_back(c);
      r.w.push_back(h * ws[i]);
      continue;
    }
    r.x.push_back(c - h * xs[i]);
    r.w.push_back(h * ws[i]);
    r.x.push_back(c + h * xs[i]);
    r.w.push_back(h * ws[i]);
  }
  return r;
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
  switch (n) {
    case 8: return gl_impl<8>(a, b);
    case 16: return gl_impl<16>(a, b);
    case 20: return gl_impl<20>(a, b);
    case 32: return gl_impl<32>(a, b);
    case 64: return gl_impl<64>(a, b);
    default: throw std::invalid_argument("gauss_legendre: unsupported order");
  }
}

Rule composite_gauss(const std::vector<double>& breaks, int n) {
  Rule out;
  const Rule ref = gauss_legendre(n);
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (size_t i = 0; i < ref.x.size(); ++i) {
      out.x.push_back(c + h * ref.x[i]);
      out.w.push_back(h * ref.w[i]);
    }
  }
  return out;
}

std::vector<double> geometric_breaks(double a, double b, double ratio) {
  std::vector<double> v{a};
  while (v.back() * ratio < b * (1 - 1e-12)) v.push_back(v.back() * ratio);
  v.push_back(b);
  return v;
}

}  // namespace sf
