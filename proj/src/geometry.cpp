#include "stablefrac/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "stablefrac/densities.hpp"
#include "stablefrac/errors.hpp"
#include "stablefrac/spectral.hpp"

namespace sf {

namespace {

constexpr double kPi = std::numbers::pi;

Vec center_of(const Vec& c, int d) { return c.empty() ? Vec(d, 0.0) : c; }

void check_center(const Vec& c, int d) {
  if (!c.empty() && static_cast<int>(c.size()) != d) fail(ErrorKind::BadSpec, "shape center has wrong dimension");
}

double lq_norm(const double* x, int d, double q) {
  if (std::isinf(q)) {
    double m = 0;
    for (int k = 0; k < d; ++k) m = std::max(m, std::abs(x[k]));
    return m;
  }
  double s = 0;
  for (int k = 0; k < d; ++k) s += std::pow(std::abs(x[k]), q);
  return std::pow(s, 1 / q);
}

void lq_grad(const double* x, int d, double q, double* g) {
  const double n = lq_norm(x, d, q);
  if (std::isinf(q)) {
    int arg = 0;
    for (int k = 1; k < d; ++k)
      if (std::abs(x[k]) > std::abs(x[arg])) arg = k;
    for (int k = 0; k < d; ++k) g[k] = 0;
    g[arg] = x[arg] < 0 ? -1.0 : 1.0;
    return;
  }
  for (int k = 0; k < d; ++k) {
    const double s = x[k] > 0 ? 1.0 : (x[k] < 0 ? -1.0 : 0.0);
    g[k] = s * std::pow(std::abs(x[k]) / n, q - 1);
  }
}

double lq_ball_volume(double q, int d) {
  if (std::isinf(q)) return std::pow(2.0, d);
  return std::pow(2 * std::tgamma(1 + 1 / q), d) / std::tgamma(1 + d / q);
}

// Per-axis extent of the shape around its center.
Vec extents(const Shape& s, int d) {
  if (auto* r = std::get_if<Hyperrectangle>(&s)) return r->half;
  if (auto* b = std::get_if<LqBall>(&s)) return Vec(d, b->radius);
  if (auto* p = std::get_if<SigmaDualBall>(&s)) {
    Vec e(d);
    for (int k = 0; k < d; ++k) {
      Vec u(d, 0.0);
      u[k] = 1;
      e[k] = p->radius * p->model.sigma_alpha(u);
    }
    return e;
  }
  return {};
}

// Boundary integral of H(normal) over {N(x) <= r} for a gauge N with gradient gN:
// r^{d-1} int_S H(grad N(theta)) / N(theta)^d dtheta.
template <class N, class GN, class H>
double gauge_boundary_integral(int d, double r, N&& gauge, GN&& grad, H&& weight) {
  if (d == 1) return 2 * weight(std::array<double, 1>{1.0}.data());
  double s = 0;
  double gv[3];
  for (const auto& n : sphere_rule(d, d == 2 ? 65536 : 96)) {
    grad(n.y.data(), gv);
    s += n.w * weight(gv) / std::pow(gauge(n.y.data()), d);
  }
  return std::pow(r, d - 1) * s;
}

}  // namespace

Field rasterize(const Shape& s, const Grid& g) {
  const int d = g.dim;
  if (auto* m = std::get_if<Mask>(&s)) {
    if (m->indicator.grid != g) fail(ErrorKind::SizeMismatch, "mask grid differs from target grid");
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m->indicator[i] != 0 ? 1.0 : 0.0;
    return out;
  }
  Vec c;
  if (auto* r = std::get_if<Hyperrectangle>(&s)) {
    if (static_cast<int>(r->half.size()) != d) fail(ErrorKind::BadSpec, "rectangle dimension mismatch");
    for (double a : r->half)
      if (!(a > 0)) fail(ErrorKind::BadSpec, "rectangle half-widths must be > 0");
    check_center(r->center, d);
    c = center_of(r->center, d);
  } else if (auto* b = std::get_if<LqBall>(&s)) {
    if (!(b->q >= 1) || !(b->radius > 0)) fail(ErrorKind::BadSpec, "ball needs q >= 1 and radius > 0");
    check_center(b->center, d);
    c = center_of(b->center, d);
  } else {
    auto& p = std::get<SigmaDualBall>(s);
    if (p.model.dim() != d) fail(ErrorKind::SizeMismatch, "model dimension differs from grid");
    if (!(p.radius > 0)) fail(ErrorKind::BadSpec, "radius must be > 0");
    check_center(p.center, d);
    c = center_of(p.center, d);
  }
  const Vec e = extents(s, d);
  for (int k = 0; k < d; ++k)
    if (std::abs(c[k]) + e[k] > 0.75 * g.L)
      fail(ErrorKind::ShapeTooLarge, "shape leaves the central box with margin 0.25 L");

  return sample(g, [&](const double* x) {
    double y[3];
    for (int k = 0; k < d; ++k) y[k] = x[k] - c[k];
    if (auto* r = std::get_if<Hyperrectangle>(&s)) {
      for (int k = 0; k < d; ++k)
        if (y[k] < -r->half[k] || y[k] >= r->half[k]) return 0.0;
      return 1.0;
    }
    if (auto* b = std::get_if<LqBall>(&s)) return lq_norm(y, d, b->q) <= b->radius ? 1.0 : 0.0;
    auto& p = std::get<SigmaDualBall>(s);
    return p.model.sigma_alpha_dual(y) <= p.radius ? 1.0 : 0.0;
  });
}

std::optional<double> volume_exact(const Shape& s, int d) {
  if (auto* r = std::get_if<Hyperrectangle>(&s)) {
    double v = 1;
    for (double a : r->half) v *= 2 * a;
    return v;
  }
  if (auto* b = std::get_if<LqBall>(&s)) return lq_ball_volume(b->q, d) * std::pow(b->radius, d);
  if (auto* p = std::get_if<SigmaDualBall>(&s))
    return geometry_constants(p->model).vol_K_polar * std::pow(p->radius, d);
  return std::nullopt;
}

double volume(const Shape& s, const Grid& g) {
  if (auto v = volume_exact(s, g.dim)) return *v;
  return integral(rasterize(s, g));
}

double surface_perimeter_aniso(const StableModel& m, const Shape& s) {
  const int d = m.dim();
  auto sig = [&](const double* v) { return m.sigma_alpha(v); };
  if (auto* r = std::get_if<Hyperrectangle>(&s)) {
    if (static_cast<int>(r->half.size()) != d) fail(ErrorKind::BadSpec, "rectangle dimension mismatch");
    double tot = 0;
    for (int i = 0; i < d; ++i) {
      Vec e(d, 0.0);
      e[i] = 1;
      double face = 1;
      for (int k = 0; k < d; ++k)
        if (k != i) face *= 2 * r->half[k];
      tot += 2 * m.sigma_alpha(e) * face;
    }
    return tot;
  }
  if (auto* b = std::get_if<LqBall>(&s)) {
    if (d == 1) return 2 * m.sigma_alpha(Vec{1.0});
    const double q = b->q;
    return gauge_boundary_integral(
        d, b->radius, [&](const double* x) { return lq_norm(x, d, q); },
        [&](const double* x, double* g) { lq_grad(x, d, q, g); }, sig);
  }
  if (auto* p = std::get_if<SigmaDualBall>(&s)) {
    // Wulff shape: sigma_alpha of the dual-norm gradient is 1 on the boundary
    if (p->model.id() == m.id() || p->model.to_json() == m.to_json())
      return d * geometry_constants(m).vol_K_polar * std::pow(p->radius, d - 1);
    const auto& pm = p->model;
    return gauge_boundary_integral(
        d, p->radius, [&](const double* x) { return pm.sigma_alpha_dual(x); },
        [&](const double* x, double* g) {
          const double h = 1e-6;
          for (int k = 0; k < d; ++k) {
            double xp[3], xm[3];
            for (int j = 0; j < d; ++j) xp[j] = xm[j] = x[j];
            xp[k] += h;
            xm[k] -= h;
            g[k] = (pm.sigma_alpha_dual(xp) - pm.sigma_alpha_dual(xm)) / (2 * h);
          }
        },
        sig);
  }
  fail(ErrorKind::UnsupportedShape, "perimeter needs a rectangle or a ball");
}

double surface_perimeter_euclid(const Shape& s, int d) {
  auto eu = [d](const double* v) {
    double r = 0;
    for (int k = 0; k < d; ++k) r += v[k] * v[k];
    return std::sqrt(r);
  };
  if (auto* r = std::get_if<Hyperrectangle>(&s)) {
    double tot = 0;
    for (int i = 0; i < d; ++i) {
      double face = 1;
      for (int k = 0; k < d; ++k)
        if (k != i) face *= 2 * r->half[k];
      tot += 2 * face;
    }
    return tot;
  }
  if (auto* b = std::get_if<LqBall>(&s)) {
    if (d == 1) return 2;
    if (b->q == 2) return sphere_area(d) * std::pow(b->radius, d - 1);
    const double q = b->q;
    return gauge_boundary_integral(
        d, b->radius, [&](const double* x) { return lq_norm(x, d, q); },
        [&](const double* x, double* g) { lq_grad(x, d, q, g); }, eu);
  }
  if (auto* p = std::get_if<SigmaDualBall>(&s)) {
    const auto& pm = p->model;
    return gauge_boundary_integral(
        d, p->radius, [&](const double* x) { return pm.sigma_alpha_dual(x); },
        [&](const double* x, double* g) {
          const double h = 1e-6;
          for (int k = 0; k < d; ++k) {
            double xp[3], xm[3];
            for (int j = 0; j < d; ++j) xp[j] = xm[j] = x[j];
            xp[k] += h;
            xm[k] -= h;
            g[k] = (pm.sigma_alpha_dual(xp) - pm.sigma_alpha_dual(xm)) / (2 * h);
          }
        },
        eu);
  }
  fail(ErrorKind::UnsupportedShape, "perimeter needs a rectangle or a ball");
}

Evolution stable_evolution(const StableModel& m) {
  return [m](const Field& f, double t) { return semigroup(m, f, t); };
}

Evolution gaussian_evolution() {
  return [](const Field& f, double t) { return gaussian_semigroup(f, t); };
}

double heat_content(const StableModel& m, const Grid& g, const Shape& a, const Shape& b, double t) {
  if (!(t > 0)) fail(ErrorKind::NegativeTime, "heat content needs t > 0");
  return inner(semigroup(m, rasterize(a, g), t), rasterize(b, g));
}

double heat_content_complement(const Evolution& ev, const Field& ind, double t) {
  if (!(t > 0)) fail(ErrorKind::NegativeTime, "heat content needs t > 0");
  return integral(ind) - inner(ev(ind, t), ind);
}

void check_t_sequence(const std::vector<double>& ts, double alpha, const Grid& g) {
  if (ts.size() < 4) fail(ErrorKind::BadSpec, "t sequence needs at least 4 values");
  for (size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0)) fail(ErrorKind::NegativeTime, "t values must be > 0");
    if (i && !(ts[i] < ts[i - 1])) fail(ErrorKind::BadSpec, "t sequence must be strictly decreasing");
  }
  if (std::pow(ts.back(), 1 / alpha) * g.xi_max() < 4)
    fail(ErrorKind::ResolutionGuard, "smallest t under-resolves the kernel: t^(1/alpha) * xi_max < 4");
}

namespace {

struct LinFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd stderr_;
  double rms = 0;
};

LinFit least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
  LinFit f;
  f.coef = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd r = y - A * f.coef;
  const int n = static_cast<int>(y.size()), k = static_cast<int>(A.cols());
  f.rms = std::sqrt(r.squaredNorm() / n);
  const double s2 = n > k ? r.squaredNorm() / (n - k) : 0.0;
  const Eigen::MatrixXd cov = s2 * (A.transpose() * A).inverse();
  f.stderr_ = cov.diagonal().cwiseSqrt();
  return f;
}

PerimeterStudy extrapolate(const std::vector<double>& ts, std::vector<double> vals, double rate) {
  PerimeterStudy p;
  p.t = ts;
  p.value = std::move(vals);
  const int n = static_cast<int>(ts.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1;
    A(i, 1) = std::pow(ts[i], rate);
    y(i) = p.value[i];
  }
  const auto f = least_squares(A, y);
  p.limit = f.coef(0);
  p.rate_coef = f.coef(1);
  p.residual = f.rms;
  // larger t comes first; values must not increase as t grows
  for (int i = 1; i < n; ++i)
    if (p.value[i - 1] > p.value[i] * (1 + 1e-6) + 1e-12) p.monotone = false;
  return p;
}

}  // namespace

PerimeterStudy perimeter_frac(const StableModel& m, const Grid& g, const Shape& s,
                              const std::vector<double>& ts) {
  if (std::holds_alternative<Mask>(s)) fail(ErrorKind::UnsupportedShape, "perimeter limits need a geometric shape");
  check_t_sequence(ts, m.alpha(), g);
  const Field ind = rasterize(s, g);
  std::vector<double> vals;
  for (double t : ts) vals.push_back(lp_norm(frac_gradient(m, semigroup(m, ind, t)), 1.0));
  return extrapolate(ts, std::move(vals), 1 - 1 / m.alpha());
}

PerimeterStudy perimeter_cl(const StableModel& m, const Grid& g, const Shape& s,
                            const std::vector<double>& ts) {
  if (std::holds_alternative<Mask>(s)) fail(ErrorKind::UnsupportedShape, "perimeter limits need a geometric shape");
  check_t_sequence(ts, m.alpha(), g);
  const Field ind = rasterize(s, g);
  std::vector<double> vals;
  for (double t : ts)
    vals.push_back(lp_norm(sigma_of_vector(m, local_gradient(semigroup(m, ind, t))), 1.0));
  return extrapolate(ts, std::move(vals), 1 / m.alpha());
}

std::vector<double> slope_fit_exponents(double alpha) {
  const double a = 1 - 1 / alpha, b = 1 / alpha;
  std::vector<double> e;
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) {
      if (i + j == 0) continue;
      const double v = i * a + j * b;
      if (v <= 1e-12) continue;
      bool dup = false;
      for (double u : e) dup = dup || std::abs(u - v) < 1e-9;
      if (!dup) e.push_back(v);
    }
  std::sort(e.begin(), e.end());
  e.resize(3);
  return e;
}

SlopeFit fit_heat_content(const Evolution& ev, double alpha, const Grid& g, const Shape& s,
                          const std::vector<double>& ts) {
  check_t_sequence(ts, alpha, g);
  const Field ind = rasterize(s, g);
  // Companion raster at half resolution for the h^2 Richardson step. Masks have no
  // geometric description to re-rasterize, so they are fitted on the raw values.
  std::optional<Field> coarse;
  if (!std::holds_alternative<Mask>(s) && g.N % 2 == 0 && g.N >= 32)
    coarse = rasterize(s, Grid(g.dim, g.N / 2, g.L));
  SlopeFit f;
  f.t = ts;
  const auto ex = slope_fit_exponents(alpha);
  const int n = static_cast<int>(ts.size());
  const int k = static_cast<int>(ex.size()) + 1;
  if (n < k + 1) fail(ErrorKind::BadSpec, "heat-content fit needs at least 5 t values");
  Eigen::MatrixXd A(n, k), B(n, 2);
  Eigen::VectorXd y(n), ly(n);
  for (int i = 0; i < n; ++i) {
    const double K = heat_content_complement(ev, ind, ts[i]);
    double Kr = K;
    if (coarse) Kr = (4 * K - heat_content_complement(ev, *coarse, ts[i])) / 3;
    f.K.push_back(K);
    f.K_refined.push_back(Kr);
    A(i, 0) = 1;
    for (int j = 1; j < k; ++j) A(i, j) = std::pow(ts[i], ex[j - 1]);
    y(i) = Kr / std::pow(ts[i], 1 / alpha);
    B(i, 0) = 1;
    B(i, 1) = std::log(ts[i]);
    ly(i) = std::log(std::max(K, 1e-300));
  }
  const auto fit = least_squares(A, y);
  f.slope = fit.coef(0);
  f.slope_stderr = fit.stderr_(0);
  f.residual = fit.rms;
  f.loglog_exponent = least_squares(B, ly).coef(1);
  if (!(std::abs(f.slope) > 0) || f.residual > 0.1 * std::abs(f.slope))
    fail(ErrorKind::FitDiverged, "heat-content fit residual exceeds 10% of the slope");
  f.reference = NAN;
  f.ratio = NAN;
  return f;
}

SlopeFit heat_content_slope(const StableModel& m, const Grid& g, const Shape& s,
                            const std::vector<double>& ts) {
  SlopeFit f = fit_heat_content(stable_evolution(m), m.alpha(), g, s, ts);
  if (!std::holds_alternative<Mask>(s)) {
    const double a = m.alpha();
    f.reference = std::tgamma(1 - 1 / a) / kPi * surface_perimeter_aniso(m, s);
    f.ratio = f.slope / f.reference;
  }
  return f;
}

SlopeFit gaussian_heat_content_slope(const Grid& g, const Shape& s, const std::vector<double>& ts) {
  SlopeFit f = fit_heat_content(gaussian_evolution(), 2.0, g, s, ts);
  if (!std::holds_alternative<Mask>(s)) {
    f.reference = surface_perimeter_euclid(s, g.dim) / std::sqrt(kPi);
    f.ratio = f.slope / f.reference;
  }
  return f;
}

IsoConstants isoperimetric_constants(const StableModel& m) {
  const double a = m.alpha(), d = m.dim();
  const double psup = density_sup(m);
  IsoConstants c;
  const double b1 = 1 / (2 * (a - 1)) * std::pow(2 * d, (a - 1) / (d + a - 1)) +
                    std::pow(1 / (2 * d), d / (d + a - 1));
  c.C1 = std::pow(b1, (d + a - 1) / d) * std::pow(2.0, (a - 1) / a) * std::pow(psup, (a - 1) / d) *
         grad_density_l1(m);
  const double b2 = 0.5 * std::pow(2 * d, 1 / (d + 1)) + std::pow(2 * d, -d / (d + 1));
  c.C2 = std::pow(b2, (d + 1) / d) * std::pow(2.0, 1 / a) * std::pow(psup, 1 / d) * abs_moment(a, 1.0);
  return c;
}

nlohmann::json to_json(const PerimeterStudy& p) {
  return {{"t", p.t}, {"value", p.value}, {"limit", p.limit}, {"rate_coef", p.rate_coef},
          {"residual", p.residual}, {"monotone", p.monotone}};
}

nlohmann::json to_json(const SlopeFit& f) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"t", f.t},
          {"K", f.K},
          {"K_refined", f.K_refined},
          {"slope", f.slope},
          {"slope_stderr", f.slope_stderr},
          {"loglog_exponent", f.loglog_exponent},
          {"reference", num(f.reference)},
          {"ratio", num(f.ratio)},
          {"residual", f.residual}};
}

}  // namespace sf
