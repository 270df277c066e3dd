#include "stablefrac/stable_model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "stablefrac/errors.hpp"
#include "stablefrac/quadrature.hpp"

namespace sf {

namespace {

constexpr double kPi = std::numbers::pi;

std::atomic<std::uint64_t> g_next_id{1};

double dot(const double* a, const double* b, int d) {
  double s = 0;
  for (int k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

double norm(const double* a, int d) { return std::sqrt(dot(a, a, d)); }

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// Maximizes f on [a,b]; f is assumed unimodal there.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters = 80) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-15; ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Fibonacci points on the unit 2-sphere.
std::vector<std::array<double, 3>> fibonacci_sphere(int n) {
  std::vector<std::array<double, 3>> p(n);
  const double ga = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    p[i] = {r * std::cos(ga * i), r * std::sin(ga * i), z};
  }
  return p;
}

// Maximizes f over unit vectors: sample, then golden-section along great circles.
template <class F>
std::pair<Vec, double> sphere_argmax(F&& f, int d, int samples) {
  if (d == 1) {
    double a = 1.0, b = -1.0;
    double fa = f(&a), fb = f(&b);
    return fa >= fb ? std::pair{Vec{1.0}, fa} : std::pair{Vec{-1.0}, fb};
  }
  if (d == 2) {
    double best = -INFINITY, bt = 0;
    const double dt = 2 * kPi / samples;
    for (int j = 0; j < samples; ++j) {
      const double t = j * dt;
      const double u[2] = {std::cos(t), std::sin(t)};
      const double v = f(u);
      if (v > best) { best = v; bt = t; }
    }
    auto g = [&](double t) {
      const double u[2] = {std::cos(t), std::sin(t)};
      return f(u);
    };
    auto [t, v] = golden_max(g, bt - dt, bt + dt);
    if (v < best) { t = bt; v = best; }
    return {Vec{std::cos(t), std::sin(t)}, v};
  }
  auto pts = fibonacci_sphere(samples);
  double best = -INFINITY;
  std::array<double, 3> p{};
  for (auto& q : pts) {
    const double v = f(q.data());
    if (v > best) { best = v; p = q; }
  }
  double delta = 4.0 / std::sqrt(static_cast<double>(samples));
  for (int round = 0; round < 40 && delta > 1e-12; ++round) {
    // orthonormal tangent frame at p
    std::array<double, 3> a = std::abs(p[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                   : std::array<double, 3>{0, 1, 0};
    double ap = dot(a.data(), p.data(), 3);
    std::array<double, 3> t1{a[0] - ap * p[0], a[1] - ap * p[1], a[2] - ap * p[2]};
    double n1 = norm(t1.data(), 3);
    for (auto& c : t1) c /= n1;
    std::array<double, 3> t2{p[1] * t1[2] - p[2] * t1[1], p[2] * t1[0] - p[0] * t1[2],
                             p[0] * t1[1] - p[1] * t1[0]};
    for (auto* t : {&t1, &t2}) {
      auto g = [&](double s) {
        double u[3];
        for (int k = 0; k < 3; ++k) u[k] = std::cos(s) * p[k] + std::sin(s) * (*t)[k];
        return f(u);
      };
      auto [s, v] = golden_max(g, -delta, delta, 60);
      if (v > best) {
        best = v;
        std::array<double, 3> q;
        for (int k = 0; k < 3; ++k) q[k] = std::cos(s) * p[k] + std::sin(s) * (*t)[k];
        double nq = norm(q.data(), 3);
        for (int k = 0; k < 3; ++k) p[k] = q[k] / nq;
      }
    }
    delta *= 0.6;
  }
  return {Vec(p.begin(), p.end()), best};
}

int default_order(int d) { return d == 2 ? 720 : 48; }

}  // namespace

double c_alpha(double a) {
  return -std::cos(a * kPi / 2) * std::tgamma(2 - a) / (a * (a - 1));
}

double c_alpha_d(double a, int d) {
  return -a * (a - 1) * std::tgamma((a + d) / 2) /
         (4 * std::cos(a * kPi / 2) * std::tgamma((a + 1) / 2) * std::pow(kPi, (d - 1) / 2.0) *
          std::tgamma(2 - a));
}

double sphere_area(int d) { return 2 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0); }

double sphere_abs_moment(int d, double p) {
  return std::tgamma(d / 2.0) * std::tgamma((p + 1) / 2) /
         (std::sqrt(kPi) * std::tgamma((p + d) / 2.0));
}

std::vector<SphereNode> sphere_rule(int d, int n) {
  std::vector<SphereNode> out;
  if (d == 1) {
    out.push_back({{1.0}, 1.0});
    out.push_back({{-1.0}, 1.0});
  } else if (d == 2) {
    if (n % 2) ++n;
    const double dt = 2 * kPi / n;
    for (int j = 0; j < n; ++j) {
      const double t = (j + 0.5) * dt;
      out.push_back({{std::cos(t), std::sin(t)}, dt});
    }
  } else if (d == 3) {
    // z in Gauss-Legendre panels, longitude uniform
    const int panels = std::max(1, n / 16);
    std::vector<double> br;
    for (int i = 0; i <= panels; ++i) br.push_back(-1.0 + 2.0 * i / panels);
    Rule zr = composite_gauss(br, 16);
    const int nphi = 2 * n;
    const double dp = 2 * kPi / nphi;
    for (size_t i = 0; i < zr.x.size(); ++i) {
      const double z = zr.x[i], r = std::sqrt(std::max(0.0, 1 - z * z));
      for (int j = 0; j < nphi; ++j) {
        const double p = (j + 0.5) * dp;
        out.push_back({{r * std::cos(p), r * std::sin(p), z}, zr.w[i] * dp});
      }
    }
  } else {
    fail(ErrorKind::UnsupportedDim, "sphere quadrature only for d <= 3");
  }
  return out;
}

DensitySpec axis_power_density(double constant, const Vec& axes, double power, int order) {
  DensitySpec s;
  s.rho = [constant, axes, power](const double* y) {
    double v = constant;
    for (size_t k = 0; k < axes.size(); ++k) v += axes[k] * std::pow(std::abs(y[k]), power);
    return v;
  };
  s.order = order;
  s.description = {{"constant", constant}, {"axes", axes}, {"power", power}};
  return s;
}

double StableModel::sigma_alpha_pow(const double* xi) const {
  const int d = dim();
  const double a = alpha();
  if (s_->kind == Kind::RotInv) return s_->rot_k * std::pow(norm(xi, d), a);
  if (s_->product) {
    double s = 0;
    for (int k = 0; k < d; ++k) s += s_->axis_a[k] * std::pow(std::abs(xi[k]), a);
    return s;
  }
  double s = 0;
  for (const auto& n : s_->nodes) {
    const double v = std::abs(dot(n.y.data(), xi, d));
    if (v > 0) s += n.w * std::pow(v, a);
  }
  return s;
}

double StableModel::sigma_alpha(const double* xi) const {
  return std::pow(sigma_alpha_pow(xi), 1.0 / alpha());
}

void StableModel::tau_im(const double* xi, double* out) const {
  const int d = dim();
  const double a = alpha();
  for (int k = 0; k < d; ++k) out[k] = 0;
  if (s_->kind == Kind::RotInv) {
    const double r = norm(xi, d);
    if (r == 0) return;
    const double c = a * s_->rot_k * std::pow(r, a - 2);
    for (int k = 0; k < d; ++k) out[k] = c * xi[k];
    return;
  }
  if (s_->product) {
    for (int k = 0; k < d; ++k)
      out[k] = a * s_->axis_a[k] * sgn(xi[k]) * std::pow(std::abs(xi[k]), a - 1);
    return;
  }
  for (const auto& n : s_->nodes) {
    const double v = dot(n.y.data(), xi, d);
    if (v == 0) continue;
    const double c = a * n.w * sgn(v) * std::pow(std::abs(v), a - 1);
    for (int k = 0; k < d; ++k) out[k] += c * n.y[k];
  }
}

void StableModel::m_sigma_im(const double* xi, double* out) const {
  const int d = dim();
  for (int k = 0; k < d; ++k) out[k] = 0;
  if (s_->kind == Kind::RotInv) {
    const double r = norm(xi, d);
    if (r == 0) return;
    const double c = (kPi / 2) * s_->rot_mass * sphere_abs_moment(d, 1.0) / r;
    for (int k = 0; k < d; ++k) out[k] = c * xi[k];
    return;
  }
  const double ca = c_alpha(alpha());
  for (const auto& n : s_->nodes) {
    const double v = dot(n.y.data(), xi, d);
    if (v == 0) continue;
    const double c = (kPi / 2) * (n.w / ca) * sgn(v);
    for (int k = 0; k < d; ++k) out[k] += c * n.y[k];
  }
}

std::vector<double> StableModel::sigma_matrix() const {
  const int d = dim();
  std::vector<double> S(d * d, 0.0);
  if (s_->kind == Kind::RotInv) {
    for (int k = 0; k < d; ++k) S[k * d + k] = s_->rot_mass / d;
    return S;
  }
  const double ca = c_alpha(alpha());
  for (const auto& n : s_->nodes)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) S[i * d + j] += (n.w / ca) * n.y[i] * n.y[j];
  return S;
}

std::vector<double> StableModel::sigma_matrix_checked() const {
  auto S = sigma_matrix();
  const int d = dim();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
      S.data(), d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.eigenvalues().minCoeff() <= 1e-12)
    fail(ErrorKind::SingularSigmaMatrix, "smallest eigenvalue of Sigma <= 1e-12");
  return S;
}

double StableModel::sigma_alpha_dual(const double* x) const {
  const int d = dim();
  const double a = alpha();
  const double nx = norm(x, d);
  if (nx == 0) return 0;
  if (s_->kind == Kind::RotInv) return nx / std::pow(s_->rot_k, 1 / a);
  if (s_->product) {
    const double q = a / (a - 1);
    double s = 0;
    for (int k = 0; k < d; ++k) s += std::pow(std::abs(x[k]) * std::pow(s_->axis_a[k], -1 / a), q);
    return std::pow(s, 1 / q);
  }
  if (d == 1) return nx / sigma_alpha(Vec{1.0}.data());
  if (d > 3) fail(ErrorKind::UnsupportedDim, "dual norm only for d <= 3");
  if (d == 2) {
    // scan a cached table of 1/sigma_alpha, then refine
    constexpr int n = 4096;
    std::call_once(s_->dual_once, [&] {
      s_->dual_tab.resize(n);
      for (int j = 0; j < n; ++j) {
        const double t = 2 * kPi * j / n;
        const double u[2] = {std::cos(t), std::sin(t)};
        s_->dual_tab[j] = 1.0 / sigma_alpha(u);
      }
    });
    int bj = 0;
    double best = -INFINITY;
    for (int j = 0; j < n; ++j) {
      const double t = 2 * kPi * j / n;
      const double v = (x[0] * std::cos(t) + x[1] * std::sin(t)) * s_->dual_tab[j];
      if (v > best) { best = v; bj = j; }
    }
    const double dt = 2 * kPi / n;
    auto g = [&](double t) {
      const double u[2] = {std::cos(t), std::sin(t)};
      return (x[0] * u[0] + x[1] * u[1]) / sigma_alpha(u);
    };
    auto [t, v] = golden_max(g, bj * dt - dt, bj * dt + dt);
    return std::max(v, best);
  }
  auto f = [&](const double* u) { return dot(x, u, d) / sigma_alpha(u); };
  return sphere_argmax(f, 3, 8192).second;
}

StableModel make_model(double alpha, int dim, SpectralMeasure spec, std::optional<double> gamma) {
  if (!(alpha > 1.0 && alpha < 2.0) || !std::isfinite(alpha))
    fail(ErrorKind::BadAlpha, "alpha must lie in the open interval (1,2)");
  if (dim < 1) fail(ErrorKind::UnsupportedDim, "dim must be >= 1");
  if (gamma && !(*gamma >= 1.0 && *gamma <= dim))
    fail(ErrorKind::BadSpec, "gamma exponent must lie in [1, d]");
  auto st = std::make_shared<ModelState>();
  st->alpha = alpha;
  st->dim = dim;
  st->gamma = gamma;
  st->id = g_next_id.fetch_add(1);
  const double ca = c_alpha(alpha);

  if (auto* ds = std::get_if<DiscreteSpec>(&spec)) {
    st->kind = StableModel::Kind::Discrete;
    if (ds->atoms.empty()) fail(ErrorKind::DegenerateMeasure, "no atoms");
    double mass = 0;
    for (const auto& at : ds->atoms) {
      if (static_cast<int>(at.y.size()) != dim) fail(ErrorKind::BadSpec, "atom dimension mismatch");
      if (!(at.w > 0) || !std::isfinite(at.w)) fail(ErrorKind::BadSpec, "atom weight must be > 0");
      const double ny = norm(at.y.data(), dim);
      if (std::abs(ny - 1) > 1e-9) fail(ErrorKind::BadSpec, "atom direction must be a unit vector");
      const double lw = ds->weights_of == WeightsOf::Lambda1 ? at.w : at.w * ca;
      Vec m(at.y);
      for (auto& c : m) c = -c;
      st->nodes.push_back({at.y, lw});
      st->nodes.push_back({m, lw});
      mass += 2 * lw / ca;
    }
    st->sigma_mass = mass;
    // one atom per axis, no repeats
    if (static_cast<int>(ds->atoms.size()) == dim) {
      Vec a(dim, 0.0);
      bool ok = true;
      for (const auto& at : ds->atoms) {
        int ax = -1;
        for (int k = 0; k < dim; ++k) {
          if (std::abs(std::abs(at.y[k]) - 1) < 1e-15) ax = k;
          else if (at.y[k] != 0) ok = false;
        }
        if (ax < 0 || a[ax] != 0) { ok = false; break; }
        a[ax] = 2 * (ds->weights_of == WeightsOf::Lambda1 ? at.w : at.w * ca);
      }
      if (ok) {
        st->product = true;
        st->axis_a = a;
      }
    }
  } else if (auto* rs = std::get_if<RotInvSpec>(&spec)) {
    st->kind = StableModel::Kind::RotInv;
    const double kappa = sphere_abs_moment(dim, alpha);
    double m = rs->canonical ? 1.0 / (2 * ca * kappa) : rs->mass;
    if (!(m > 0) || !std::isfinite(m)) fail(ErrorKind::BadSpec, "rotation-invariant mass must be > 0");
    st->rot_mass = m;
    st->sigma_mass = m;
    st->rot_k = ca * m * kappa;
    // nodes kept for generic consumers
    const double scale = m / sphere_area(dim);
    for (auto& n : sphere_rule(dim, default_order(dim))) st->nodes.push_back({n.y, n.w * scale * ca});
  } else {
    auto& dn = std::get<DensitySpec>(spec);
    st->kind = StableModel::Kind::Density;
    if (!dn.rho) fail(ErrorKind::BadSpec, "density function missing");
    if (dim > 3) fail(ErrorKind::UnsupportedDim, "density measures only for d <= 3");
    const int order = dn.order > 0 ? dn.order : default_order(dim);
    double mass = 0;
    for (auto& n : sphere_rule(dim, order)) {
      const double r = dn.rho(n.y.data());
      if (!(r >= 0) || !std::isfinite(r)) fail(ErrorKind::BadSpec, "density must be >= 0");
      if (r == 0) continue;
      st->nodes.push_back({n.y, n.w * r * ca});
      mass += n.w * r;
    }
    if (!(mass > 0)) fail(ErrorKind::DegenerateMeasure, "density has zero mass");
    st->sigma_mass = mass;
    // odd test functions y_k and y_k^3 must integrate to ~0
    for (int k = 0; k < dim; ++k) {
      double m1 = 0, m3 = 0;
      for (const auto& n : st->nodes) {
        m1 += n.w * n.y[k];
        m3 += n.w * n.y[k] * n.y[k] * n.y[k];
      }
      const double lm = mass * ca;
      if (std::abs(m1) > 1e-8 * lm || std::abs(m3) > 1e-8 * lm)
        fail(ErrorKind::AsymmetricMeasure, "density is not symmetric under y -> -y");
    }
  }
  st->spec = std::move(spec);

  StableModel tmp{st};
  if (st->kind == StableModel::Kind::RotInv) {
    st->margin = st->rot_k;
  } else {
    auto negf = [&](const double* u) { return -tmp.sigma_alpha_pow(u); };
    double m = -sphere_argmax(negf, dim, dim == 3 ? 8192 : 4096).second;
    if (st->product) m = std::min(m, *std::min_element(st->axis_a.begin(), st->axis_a.end()));
    st->margin = m;
  }
  if (!(st->margin > 1e-12))
    fail(ErrorKind::DegenerateMeasure, "nondegeneracy margin <= 1e-12");
  return tmp;
}

StableModel product_model(double alpha, const Vec& w) {
  DiscreteSpec s;
  for (size_t k = 0; k < w.size(); ++k) {
    Vec y(w.size(), 0.0);
    y[k] = 1;
    s.atoms.push_back({y, w[k]});
  }
  return make_model(alpha, static_cast<int>(w.size()), s);
}

StableModel rotational_model(double alpha, int dim) {
  return make_model(alpha, dim, RotInvSpec{0.0, true});
}

StableModel rotational_model_mass(double alpha, int dim, double m) {
  return make_model(alpha, dim, RotInvSpec{m, false});
}

StableModel StableModel::with_alpha(double beta) const { return make_model(beta, dim(), spec(), gamma_exponent()); }

nlohmann::json StableModel::to_json() const {
  nlohmann::json s;
  if (auto* ds = std::get_if<DiscreteSpec>(&spec())) {
    s["kind"] = "discrete";
    s["weights_of"] = ds->weights_of == WeightsOf::Lambda1 ? "lambda1" : "sigma";
    auto arr = nlohmann::json::array();
    for (const auto& a : ds->atoms) arr.push_back({{"y", a.y}, {"w", a.w}});
    s["atoms"] = arr;
  } else if (auto* rs = std::get_if<RotInvSpec>(&spec())) {
    s["kind"] = "rotinv";
    if (rs->canonical) s["normalization"] = "canonical";
    else s["mass"] = rs->mass;
  } else {
    auto& dn = std::get<DensitySpec>(spec());
    s["kind"] = "density";
    s["profile"] = dn.description;
    if (dn.order > 0) s["order"] = dn.order;
  }
  nlohmann::json j{{"alpha", alpha()}, {"dim", dim()}, {"sigma", s}};
  if (gamma_exponent()) j["gamma"] = *gamma_exponent();
  return j;
}

StableModel model_from_json(const nlohmann::json& j) {
  const double alpha = j.at("alpha").get<double>();
  const int dim = j.at("dim").get<int>();
  const auto& s = j.at("sigma");
  const std::string kind = s.at("kind").get<std::string>();
  std::optional<double> gamma;
  if (j.contains("gamma")) gamma = j.at("gamma").get<double>();
  if (kind == "discrete") {
    DiscreteSpec ds;
    if (s.contains("weights_of")) {
      const auto wo = s.at("weights_of").get<std::string>();
      if (wo == "lambda1") ds.weights_of = WeightsOf::Lambda1;
      else if (wo == "sigma") ds.weights_of = WeightsOf::Sigma;
      else fail(ErrorKind::BadSpec, "weights_of must be lambda1 or sigma");
    }
    for (const auto& a : s.at("atoms")) ds.atoms.push_back({a.at("y").get<Vec>(), a.at("w").get<double>()});
    return make_model(alpha, dim, ds, gamma);
  }
  if (kind == "rotinv") {
    RotInvSpec rs;
    if (s.contains("normalization")) {
      if (s.at("normalization").get<std::string>() != "canonical")
        fail(ErrorKind::BadSpec, "normalization must be canonical");
      rs.canonical = true;
    } else {
      rs.mass = s.at("mass").get<double>();
    }
    return make_model(alpha, dim, rs, gamma);
  }
  if (kind == "density") {
    const auto& p = s.at("profile");
    Vec axes = p.contains("axes") ? p.at("axes").get<Vec>() : Vec(dim, 0.0);
    if (static_cast<int>(axes.size()) != dim) fail(ErrorKind::BadSpec, "profile axes length must equal dim");
    const int order = s.contains("order") ? s.at("order").get<int>() : 0;
    return make_model(alpha, dim,
                      axis_power_density(p.value("constant", 0.0), axes, p.value("power", 2.0), order),
                      gamma);
  }
  fail(ErrorKind::BadSpec, "unknown sigma kind '" + kind + "'");
}

GeometryConstants geometry_constants(const StableModel& m) {
  const int d = m.dim();
  const double a = m.alpha();
  GeometryConstants g;
  if (m.is_product()) {
    const double q = a / (a - 1);
    double pa = 1, pb = 1;
    for (double c : m.axis_coeffs()) {
      pa *= std::pow(c, -1 / a);
      pb *= std::pow(c, 1 / a);
    }
    g.vol_K = pa * std::pow(2 * std::tgamma(1 + 1 / a), d) / std::tgamma(1 + d / a);
    g.vol_K_polar = pb * std::pow(2 * std::tgamma(1 + 1 / q), d) / std::tgamma(1 + d / q);
  } else if (m.kind() == StableModel::Kind::RotInv) {
    const double ball = std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0 + 1);
    const double r = std::pow(m.rot_coeff(), 1 / a);
    g.vol_K = ball * std::pow(r, -d);
    g.vol_K_polar = ball * std::pow(r, d);
    g.sigma_alpha_sphere_integral = r * sphere_area(d);
    return g;
  }
  if (d > 3) fail(ErrorKind::UnsupportedDim, "geometry constants only for d <= 3");
  double vk = 0, vp = 0, si = 0;
  for (const auto& n : sphere_rule(d, d == 2 ? 8192 : 96)) {
    const double s = m.sigma_alpha(n.y.data());
    si += n.w * s;
    if (!m.is_product()) {
      vk += n.w * std::pow(s, -d);
      vp += n.w * std::pow(m.sigma_alpha_dual(n.y.data()), -d);
    }
  }
  if (!m.is_product()) {
    g.vol_K = vk / d;
    g.vol_K_polar = vp / d;
  }
  g.sigma_alpha_sphere_integral = si;
  return g;
}

double radial_mean(const StableModel& m) {
  const int d = m.dim();
  const double a = m.alpha();
  return std::pow(kPi, -(d + 1) / 2.0) * std::tgamma((d + 1) / 2.0) * std::tgamma((a - 1) / a) *
         geometry_constants(m).sigma_alpha_sphere_integral;
}

}  // namespace sf
