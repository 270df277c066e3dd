#include "stablefrac/densities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>

#include "stablefrac/errors.hpp"
#include "stablefrac/quadrature.hpp"

namespace sf {

namespace {

constexpr double kPi = std::numbers::pi;
// Beyond this (standardized) radius densities come from the asymptotic series.
constexpr double kSeriesFrom = 30.0;

std::atomic<long> g_clamps{0};

double clamp_pos(double v) {
  if (v < 1e-30) {
    g_clamps.fetch_add(1);
    return 1e-30;
  }
  return v;
}

const Rule& unit_gl20() {
  static const Rule r = gauss_legendre(20, 0.0, 1.0);
  return r;
}

const Rule& unit_gl16() {
  static const Rule r = gauss_legendre(16, 0.0, 1.0);
  return r;
}

// Calls f(x, w) over a composite rule on consecutive breakpoints.
template <class F>
void over_panels(const std::vector<double>& br, const Rule& u, F&& f) {
  for (size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], h = br[i + 1] - br[i];
    if (h <= 0) continue;
    for (size_t k = 0; k < u.x.size(); ++k) f(a + h * u.x[k], h * u.w[k]);
  }
}

// Breakpoints: [0, top*2^-lo_pow], geometric to top/2^g, then `uniform` equal panels to top.
std::vector<double> mixed_breaks(double top, int lo_pow, int g, int uniform) {
  std::vector<double> br{0.0};
  for (int k = lo_pow; k > g; --k) br.push_back(top * std::ldexp(1.0, -k));
  const double start = top * std::ldexp(1.0, -g);
  for (int i = 0; i <= uniform; ++i) br.push_back(start + (top - start) * i / uniform);
  return br;
}

// F_n(x) = int_0^inf xi^n exp(i x xi - xi^alpha) d xi for x >= 0, evaluated on the ray
// xi = r e^{i theta} with theta = pi / (4 alpha), where both factors decay.
std::complex<double> rotated_transform(double alpha, int n, double x) {
  const double th = kPi / (4 * alpha);
  const std::complex<double> e1 = std::polar(1.0, th), ea = std::polar(1.0, alpha * th);
  const double decay = std::cos(alpha * th);
  double rmax = std::pow(50.0 / decay, 1 / alpha);
  if (x > 0) rmax = std::min(rmax, 50.0 / (x * std::sin(th)));
  const auto br = mixed_breaks(rmax, 44, 5, 32);
  std::complex<double> s = 0;
  const std::complex<double> ix = std::complex<double>(0, x) * e1;
  over_panels(br, unit_gl20(), [&](double r, double w) {
    s += w * std::pow(r, n) * std::exp(ix * r - std::pow(r, alpha) * ea);
  });
  return s * std::pow(e1, n + 1);
}

// Asymptotic expansion of the radial density with char. function exp(-|xi|^alpha):
// p(r) = sum_k coef_k r^{-(k alpha + d)}. Visits (coef, exponent) until terms are
// negligible at radius r (or start to grow).
template <class F>
void series_terms(double alpha, int d, double r, F&& visit) {
  const double lr = std::log(r), pref = std::pow(kPi, -d / 2.0 - 1);
  double prev = INFINITY, total = 0;
  for (int k = 1; k <= 400; ++k) {
    const double ka = k * alpha;
    const double s = std::sin(kPi * ka / 2);
    const double lmag = ka * std::log(2.0) - std::lgamma(k + 1.0) + std::lgamma((d + ka) / 2) +
                        std::lgamma(ka / 2 + 1);
    const double mag_at_r = std::exp(lmag - (ka + d) * lr);
    if (k > 2 && mag_at_r > prev) break;
    const double coef = (k % 2 ? 1.0 : -1.0) * pref * std::exp(lmag) * s;
    visit(coef, ka + d);
    total += std::abs(coef) * std::exp(-(ka + d) * lr);
    prev = mag_at_r;
    if (mag_at_r < 1e-18 * total) break;
  }
}

double series_density(double alpha, int d, double r) {
  double s = 0;
  series_terms(alpha, d, r, [&](double c, double e) { s += c * std::pow(r, -e); });
  return s;
}

double series_density_deriv(double alpha, int d, double r) {
  double s = 0;
  series_terms(alpha, d, r, [&](double c, double e) { s -= e * c * std::pow(r, -e - 1); });
  return s;
}

// int_X^inf x^q p(x) dx from the series, q + 1 < alpha + d.
double series_tail_moment(double alpha, int d, double X, double q) {
  double s = 0;
  series_terms(alpha, d, X, [&](double c, double e) { s += c * std::pow(X, q + 1 - e) / (e - q - 1); });
  return s;
}

bool use_series(double alpha, double r) { return r > kSeriesFrom && alpha < 2; }

// Hankel-type integrals for the radial density (d = 2, 3) at moderate r.
// deriv=false: c_d int e^{-rho^a} rho^{d-1} J0~(rho r); deriv=true: -c_d int e^{-rho^a} rho^d J1~(rho r).
double hankel_radial(double alpha, int d, double r, bool deriv) {
  const double rmax = std::pow(52.0, 1 / alpha);
  const int uniform = std::max(16, static_cast<int>(std::ceil(rmax * std::max(r, 1.0) / 1.2)));
  const auto br = mixed_breaks(rmax, 40, 4, uniform);
  double s = 0;
  over_panels(br, unit_gl16(), [&](double rho, double w) {
    const double z = rho * r;
    const double e = std::exp(-std::pow(rho, alpha));
    double k;
    if (d == 2) {
      k = deriv ? rho * rho * ::j1(z) : rho * ::j0(z);
    } else {
      double j0, j1;
      if (z < 1e-4) {
        j0 = 1 - z * z / 6;
        j1 = z / 3 - z * z * z / 30;
      } else {
        j0 = std::sin(z) / z;
        j1 = std::sin(z) / (z * z) - std::cos(z) / z;
      }
      k = deriv ? rho * rho * rho * j1 : rho * rho * j0;
    }
    s += w * e * k;
  });
  const double c = d == 2 ? 1 / (2 * kPi) : 1 / (2 * kPi * kPi);
  return deriv ? -c * s : c * s;
}

// Per-axis scale s_k with sigma_alpha^alpha = sum_k |xi_k / ...|: a_k = s_k^alpha.
Vec product_scales(const StableModel& m) {
  Vec s;
  for (double a : m.axis_coeffs()) s.push_back(std::pow(a, 1 / m.alpha()));
  return s;
}

double rot_scale(const StableModel& m) { return std::pow(m.rot_coeff(), 1 / m.alpha()); }

void check_cone_dim(int d) {
  if (d != 2 && d != 3) fail(ErrorKind::UnsupportedDim, "cone representation needs d in {2,3}");
}

// One-dimensional tables over [0, inf): nodes, weights, p and p'/p.
struct Table1D {
  Vec x, w, p, r;
};

Table1D build_table_1d(double alpha, double panel) {
  Table1D t;
  const Rule& u = unit_gl16();
  std::vector<double> br;
  for (double a = 0; a < kSeriesFrom - 1e-12; a += panel) br.push_back(a);
  br.push_back(kSeriesFrom);
  over_panels(br, u, [&](double x, double w) {
    t.x.push_back(x);
    t.w.push_back(w);
  });
  // tail x = X/v, v in (0, 1]
  std::vector<double> vb;
  for (int k = 20; k >= 0; --k) vb.push_back(std::ldexp(1.0, -k));
  over_panels(vb, u, [&](double v, double w) {
    t.x.push_back(kSeriesFrom / v);
    t.w.push_back(w * kSeriesFrom / (v * v));
  });
  for (double x : t.x) {
    // unclamped values keep p'/p exact far out
    const double p = use_series(alpha, x) ? series_density(alpha, 1, x) : density_1d(alpha, x);
    const double dp = use_series(alpha, x) ? series_density_deriv(alpha, 1, x) : density_1d_deriv(alpha, x);
    t.p.push_back(p);
    t.r.push_back(p > 0 ? dp / p : 0.0);
  }
  return t;
}

const Table1D& table_1d(double alpha, double panel) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, Table1D> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(alpha, panel);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_table_1d(alpha, panel)).first;
  return it->second;
}

// Radial tables (standard scale) over [0, inf) for d = 2, 3.
Table1D build_table_radial(double alpha, int d) {
  Table1D t;
  const Rule& u = unit_gl16();
  std::vector<double> br;
  for (double a = 0; a < kSeriesFrom - 1e-12; a += 0.5) br.push_back(a);
  br.push_back(kSeriesFrom);
  over_panels(br, u, [&](double x, double w) {
    t.x.push_back(x);
    t.w.push_back(w);
  });
  std::vector<double> vb;
  for (int k = 20; k >= 0; --k) vb.push_back(std::ldexp(1.0, -k));
  over_panels(vb, u, [&](double v, double w) {
    t.x.push_back(kSeriesFrom / v);
    t.w.push_back(w * kSeriesFrom / (v * v));
  });
  for (double x : t.x) {
    const double p = use_series(alpha, x) ? series_density(alpha, d, x) : radial_density(alpha, d, x);
    t.p.push_back(p);
    t.r.push_back(p > 0 ? radial_density_deriv(alpha, d, x) / p : 0.0);
  }
  return t;
}

const Table1D& table_radial(double alpha, int d) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, Table1D> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(alpha, d);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_table_radial(alpha, d)).first;
  return it->second;
}

// Sum over the full product grid of tables (mirrored to both half-lines) of
// F(ratios) * prod p. F receives the per-axis log-derivatives already rescaled.
template <class F>
double product_integral(const StableModel& m, F&& fn) {
  const int d = m.dim();
  const Vec s = product_scales(m);
  const Table1D& t = table_1d(m.alpha(), d >= 3 ? 2.0 : 0.5);
  const size_t n = t.x.size();
  double total = 0;
  double rr[3];
  if (d == 1) {
    for (size_t i = 0; i < n; ++i) {
      rr[0] = t.r[i] / s[0];
      total += t.w[i] * t.p[i] * fn(rr);
    }
    return 2 * total;
  }
  if (d == 2) {
    for (size_t i = 0; i < n; ++i) {
      rr[0] = t.r[i] / s[0];
      double row = 0;
      for (size_t j = 0; j < n; ++j) {
        rr[1] = t.r[j] / s[1];
        row += t.w[j] * t.p[j] * fn(rr);
      }
      total += t.w[i] * t.p[i] * row;
    }
    return 4 * total;
  }
  for (size_t i = 0; i < n; ++i) {
    rr[0] = t.r[i] / s[0];
    double plane = 0;
    for (size_t j = 0; j < n; ++j) {
      rr[1] = t.r[j] / s[1];
      double row = 0;
      for (size_t k = 0; k < n; ++k) {
        rr[2] = t.r[k] / s[2];
        row += t.w[k] * t.p[k] * fn(rr);
      }
      plane += t.w[j] * t.p[j] * row;
    }
    total += t.w[i] * t.p[i] * plane;
  }
  return 8 * total;
}

}  // namespace

long density_clamp_count() { return g_clamps.load(); }

double density_1d(double alpha, double x) {
  if (!(alpha > 1 && alpha <= 2)) fail(ErrorKind::BadAlpha, "density_1d needs alpha in (1,2]");
  x = std::abs(x);
  if (use_series(alpha, x)) return clamp_pos(series_density(alpha, 1, x));
  return clamp_pos(rotated_transform(alpha, 0, x).real() / kPi);
}

double density_1d_deriv(double alpha, double x) {
  if (!(alpha > 1 && alpha <= 2)) fail(ErrorKind::BadAlpha, "density_1d needs alpha in (1,2]");
  const double sg = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  if (x == 0) return 0;
  if (use_series(alpha, x)) return sg * series_density_deriv(alpha, 1, x);
  return -sg * rotated_transform(alpha, 1, x).imag() / kPi;
}

double radial_density(double alpha, int d, double r) {
  check_cone_dim(d);
  r = std::abs(r);
  if (use_series(alpha, r)) return clamp_pos(series_density(alpha, d, r));
  return clamp_pos(hankel_radial(alpha, d, r, false));
}

double radial_density_deriv(double alpha, int d, double r) {
  check_cone_dim(d);
  r = std::abs(r);
  if (r == 0) return 0;
  if (use_series(alpha, r)) return series_density_deriv(alpha, d, r);
  return hankel_radial(alpha, d, r, true);
}

double density_cone(const StableModel& m, const double* x, int order) {
  const int d = m.dim();
  check_cone_dim(d);
  const double a = m.alpha();
  double s = 0;
  for (const auto& n : sphere_rule(d, order > 0 ? order : (d == 2 ? 720 : 48))) {
    const double sg = m.sigma_alpha(n.y.data());
    double ip = 0;
    for (int k = 0; k < d; ++k) ip += x[k] * n.y[k];
    s += n.w * std::pow(sg, -d) * rotated_transform(a, d - 1, std::abs(ip / sg)).real();
  }
  return clamp_pos(s * std::pow(2 * kPi, -d));
}

void density_cone_grad(const StableModel& m, const double* x, double* out, int order) {
  const int d = m.dim();
  check_cone_dim(d);
  const double a = m.alpha();
  for (int k = 0; k < d; ++k) out[k] = 0;
  for (const auto& n : sphere_rule(d, order > 0 ? order : (d == 2 ? 720 : 48))) {
    const double sg = m.sigma_alpha(n.y.data());
    double ip = 0;
    for (int k = 0; k < d; ++k) ip += x[k] * n.y[k];
    const double arg = ip / sg;
    // G'(a) = -int r^d e^{-r^alpha} sin(a r) dr
    const double gp = -(arg < 0 ? -1.0 : 1.0) * rotated_transform(a, d, std::abs(arg)).imag();
    const double c = n.w * std::pow(sg, -d - 1) * gp;
    for (int k = 0; k < d; ++k) out[k] += c * n.y[k];
  }
  const double sc = std::pow(2 * kPi, -d);
  for (int k = 0; k < d; ++k) out[k] *= sc;
}

double density_point(const StableModel& m, const double* x) {
  const int d = m.dim();
  const double a = m.alpha();
  if (m.is_product()) {
    const Vec s = product_scales(m);
    double p = 1;
    for (int k = 0; k < d; ++k) p *= density_1d(a, x[k] / s[k]) / s[k];
    return p;
  }
  if (m.kind() == StableModel::Kind::RotInv) {
    const double s = rot_scale(m);
    double r = 0;
    for (int k = 0; k < d; ++k) r += x[k] * x[k];
    r = std::sqrt(r);
    if (d == 1) return density_1d(a, r / s) / s;
    return radial_density(a, d, r / s) * std::pow(s, -d);
  }
  return density_cone(m, x);
}

void density_grad(const StableModel& m, const double* x, double* out) {
  const int d = m.dim();
  const double a = m.alpha();
  if (m.is_product()) {
    const Vec s = product_scales(m);
    double pk[3], dk[3];
    for (int k = 0; k < d; ++k) {
      pk[k] = density_1d(a, x[k] / s[k]) / s[k];
      dk[k] = density_1d_deriv(a, x[k] / s[k]) / (s[k] * s[k]);
    }
    for (int j = 0; j < d; ++j) {
      double v = dk[j];
      for (int k = 0; k < d; ++k)
        if (k != j) v *= pk[k];
      out[j] = v;
    }
    return;
  }
  if (m.kind() == StableModel::Kind::RotInv) {
    const double s = rot_scale(m);
    double r = 0;
    for (int k = 0; k < d; ++k) r += x[k] * x[k];
    r = std::sqrt(r);
    double dp;
    if (d == 1) dp = density_1d_deriv(a, r / s) / (s * s);
    else dp = radial_density_deriv(a, d, r / s) * std::pow(s, -d - 1);
    for (int k = 0; k < d; ++k) out[k] = r > 0 ? dp * x[k] / r : 0.0;
    return;
  }
  density_cone_grad(m, x, out);
}

namespace {

// int_{t0}^T g(t) dt with t0 = 1e-10/|x|, T possibly infinite; the tail beyond the
// last panel uses the fitted power decay. Callers account for [0, t0].
Vec radial_t_integral(const std::function<void(double, double*)>& g, int comps, double xnorm,
                      double T) {
  const double t0 = 1e-10 / xnorm;
  const double thi = std::min(T, 1e6 / xnorm);
  std::vector<double> br;
  for (double t = t0; t < thi; t *= 1.5) br.push_back(t);
  br.push_back(thi);
  Vec acc(comps, 0.0), tmp(comps);
  over_panels(br, unit_gl16(), [&](double t, double w) {
    g(t, tmp.data());
    for (int k = 0; k < comps; ++k) acc[k] += w * tmp[k];
  });
  if (thi < T) {
    Vec a(comps), b(comps);
    g(thi / 2, a.data());
    g(thi, b.data());
    for (int k = 0; k < comps; ++k) {
      if (b[k] == 0 || a[k] == 0) continue;
      const double e = std::log(std::abs(a[k] / b[k])) / std::log(2.0);
      if (e > 1.01) acc[k] += b[k] * thi / (e - 1);
    }
  }
  return acc;
}

}  // namespace

Vec kernel_kT(const StableModel& m, const double* x, double T) {
  const int d = m.dim();
  double xn = 0;
  for (int k = 0; k < d; ++k) xn += x[k] * x[k];
  xn = std::sqrt(xn);
  if (xn == 0) fail(ErrorKind::OriginSingularity, "kernel evaluated at the origin");
  if (!(T > 0)) fail(ErrorKind::BadSpec, "T must be > 0");
  const double a = m.alpha();
  auto g = [&](double t, double* out) {
    double y[3];
    for (int k = 0; k < d; ++k) y[k] = t * x[k];
    density_grad(m, y, out);
    const double c = -a * std::pow(t, d - a);
    for (int k = 0; k < d; ++k) out[k] *= c;
  };
  return radial_t_integral(g, d, xn, T);
}

Vec kernel_axes(double alpha, int d, const double* x) {
  return kernel_kT(product_model(alpha, Vec(d, 0.5)), x, INFINITY);
}

double potential_kernel(const StableModel& m, const double* x) {
  const int d = m.dim();
  if (d < 2) fail(ErrorKind::UnsupportedDim, "potential kernel needs d >= 2");
  double xn = 0;
  for (int k = 0; k < d; ++k) xn += x[k] * x[k];
  xn = std::sqrt(xn);
  if (xn == 0) fail(ErrorKind::OriginSingularity, "potential kernel evaluated at the origin");
  const double a = m.alpha();
  auto g = [&](double t, double* out) {
    double y[3];
    for (int k = 0; k < d; ++k) y[k] = t * x[k];
    out[0] = a * std::pow(t, d - a - 1) * density_point(m, y);
  };
  Vec v = radial_t_integral(g, 1, xn, INFINITY);
  // on [0, t0] the integrand is p(0) t^{d-a-1}
  const double t0 = 1e-10 / xn;
  return v[0] + a * density_sup(m) * std::pow(t0, d - a) / (d - a);
}

double abs_moment(double alpha, double p) {
  return std::pow(2.0, p) * std::tgamma((1 + p) / 2) * std::tgamma(1 - p / alpha) /
         (std::sqrt(kPi) * std::tgamma(1 - p / 2));
}

double abs_moment_quadrature(double alpha, double p) {
  if (!(p < alpha)) fail(ErrorKind::BadExponent, "moment order must be < alpha");
  const auto& t = table_1d(alpha, 0.5);
  double s = 0;
  for (size_t i = 0; i < t.x.size() && t.x[i] <= kSeriesFrom; ++i)
    s += t.w[i] * std::pow(t.x[i], p) * t.p[i];
  return 2 * (s + series_tail_moment(alpha, 1, kSeriesFrom, p));
}

double density_1d_mass(double alpha) { return abs_moment_quadrature(alpha, 0.0); }

double density_sup(const StableModel& m) {
  const int d = m.dim();
  return std::pow(2 * kPi, -d) * std::tgamma(1 + d / m.alpha()) * geometry_constants(m).vol_K;
}

double grad_density_l1(const StableModel& m) {
  const int d = m.dim();
  const double a = m.alpha();
  if (m.is_product()) {
    if (d == 1) return 2 * density_sup(m);
    return product_integral(m, [d](const double* r) {
      double s = 0;
      for (int k = 0; k < d; ++k) s += r[k] * r[k];
      return std::sqrt(s);
    });
  }
  if (m.kind() == StableModel::Kind::RotInv) {
    const double g = std::tgamma(1 + 1 / a) / rot_scale(m);
    if (d == 1) return 2 * g / kPi;
    if (d == 2) return g;
    if (d == 3) return 4 * g / kPi;
  }
  fail(ErrorKind::UnsupportedModel, "gradient L1 norm needs a product or rotation-invariant model");
}

double logderiv_lp(const StableModel& m, double p) {
  if (!(p >= 1)) fail(ErrorKind::BadExponent, "p must be >= 1");
  const int d = m.dim();
  const double a = m.alpha();
  if (m.is_product()) {
    const double v = product_integral(m, [d, p](const double* r) {
      double s = 0;
      for (int k = 0; k < d; ++k) s += r[k] * r[k];
      return std::pow(s, p / 2);
    });
    return std::pow(v, 1 / p);
  }
  if (m.kind() == StableModel::Kind::RotInv) {
    const double sc = rot_scale(m);
    double v = 0;
    if (d == 1) {
      const auto& t = table_1d(a, 0.5);
      for (size_t i = 0; i < t.x.size(); ++i) v += 2 * t.w[i] * t.p[i] * std::pow(std::abs(t.r[i]), p);
    } else {
      const auto& t = table_radial(a, d);
      const double area = sphere_area(d);
      for (size_t i = 0; i < t.x.size(); ++i)
        v += area * t.w[i] * std::pow(t.x[i], d - 1) * t.p[i] * std::pow(std::abs(t.r[i]), p);
    }
    return std::pow(v, 1 / p) / sc;
  }
  fail(ErrorKind::UnsupportedModel, "log-derivative moments need a product or rotation-invariant model");
}

nlohmann::json moments(const StableModel& m, const std::vector<double>& p_list) {
  const double a = m.alpha();
  nlohmann::json j;
  j["E_abs_Y"] = abs_moment(a, 1.0);
  j["E_abs_Y_quadrature"] = abs_moment_quadrature(a, 1.0);
  j["radial_mean"] = radial_mean(m);
  j["p_sup"] = density_sup(m);
  if (m.is_product() || m.kind() == StableModel::Kind::RotInv) {
    j["grad_p_L1"] = grad_density_l1(m);
    nlohmann::json ld = nlohmann::json::object();
    for (double p : p_list) {
      std::string key = nlohmann::json(p).dump();
      ld[key] = logderiv_lp(m, p);
    }
    j["logderiv_Lp"] = ld;
  }
  return j;
}

}  // namespace sf
