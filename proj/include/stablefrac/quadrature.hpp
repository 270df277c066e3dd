#pragma once

#include <functional>
#include <vector>

namespace sf {

// Nodes and weights of a quadrature rule on an interval.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  double apply(const std::function<double(double)>& f) const {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
    return s;
  }
};

// Gauss-Legendre rule on [a,b]; n must be one of 8, 16, 20, 32, 64.
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre over consecutive panels given by breakpoints.
Rule composite_gauss(const std::vector<double>& breaks, int n);

// Geometric breakpoints a, a*r, a*r^2, ... up to b (b always included).
std::vector<double> geometric_breaks(double a, double b, double ratio);

}  // namespace sf
