#include "stablefrac/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>

#include <fmt/format.h>

#include "stablefrac/errors.hpp"
#include "stablefrac/families.hpp"
#include "stablefrac/spectral.hpp"

namespace sf {

namespace {

void check_exponents(double p, int d, double alpha) {
  if (!(p > 1) || !(p < d / (alpha - 1)))
    fail(ErrorKind::BadExponents, fmt::format("need 1 < p < d/(alpha-1) = {:.6g}, got p = {:.6g}", d / (alpha - 1), p));
}

// Normalizes to ||f||_{p*} = 1.
Field normalized(const Field& f, double ps) {
  const double n = lp_norm(f, ps);
  if (!(n > 0)) fail(ErrorKind::ZeroField, "field vanishes");
  return (1 / n) * f;
}

// |tau(xi)|^2 on the grid.
std::vector<double> tau_square(const StableModel& m, const Grid& g) {
  const auto tab = symbol_table(m, g);
  const std::size_t n = g.size();
  std::vector<double> t(n, 0.0);
  for (int k = 0; k < g.dim; ++k)
    for (std::size_t i = 0; i < n; ++i) t[i] += tab->tau[k * n + i] * tab->tau[k * n + i];
  return t;
}

// Gradient of ||D f||_p^p.
Field numerator_gradient(const StableModel& m, const Field& f, double p, const std::vector<double>& tt) {
  if (p == 2) {
    std::vector<double> s(tt.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = 2 * tt[i];
    return apply_real_table(f, s);
  }
  VectorField D = frac_gradient(m, f);
  const Field len = euclid_norm(D);
  for (int k = 0; k < f.grid.dim; ++k)
    for (std::size_t i = 0; i < f.size(); ++i)
      D.c[k][i] *= len[i] > 0 ? std::pow(len[i], p - 2) : 0.0;
  return -p * frac_divergence(m, D);
}

// Gradient of ||f||_{p*}^p.
Field denominator_gradient(const Field& f, double p, double ps) {
  const double scale = p * std::pow(lp_norm(f, ps), p - ps);
  Field out(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = scale * std::pow(std::abs(f[i]), ps - 2) * f[i];
  return out;
}

// Indicator of the modes the flow may use. It excludes the mean and every Nyquist
// plane: there the Hermitian symbol loses its normal component, which leaves
// spurious modes whose cost decays with the mesh and would attract the minimizer.
std::vector<double> flow_modes(const Grid& g) {
  std::vector<double> keep(g.size(), 1.0);
  std::vector<int> j(g.dim);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    g.unravel(i, j.data());
    if (i == 0 || std::find(j.begin(), j.end(), g.N / 2) != j.end()) keep[i] = 0;
  }
  return keep;
}

}  // namespace

double sobolev_exponent(double p, int d, double alpha) { return p * d / (d - p * (alpha - 1)); }

double rayleigh_quotient(const StableModel& m, const Field& f, double p) {
  check_exponents(p, f.grid.dim, m.alpha());
  const double den = lp_norm(f, sobolev_exponent(p, f.grid.dim, m.alpha()));
  if (!(den > 0)) fail(ErrorKind::ZeroField, "Rayleigh quotient of the zero field");
  return std::pow(lp_norm(frac_gradient(m, f), p) / den, p);
}

double euler_lagrange_residual(const StableModel& m, const Field& f, double p, double* mu) {
  check_exponents(p, f.grid.dim, m.alpha());
  const double ps = sobolev_exponent(p, f.grid.dim, m.alpha());
  const auto keep = flow_modes(f.grid);
  const Field g = apply_real_table(numerator_gradient(m, f, p, tau_square(m, f.grid)), keep);
  const Field dM = apply_real_table(denominator_gradient(f, p, ps), keep);
  const double k = inner(g, dM) / inner(dM, dM);
  if (mu) *mu = k;
  return lp_norm(g - k * dM, 2) / lp_norm(g, 2);
}

FlowState run_flow(const StableModel& m, const Field& start, double p, const OptimizeOptions& opts) {
  const Grid& g = start.grid;
  check_exponents(p, g.dim, m.alpha());
  const double ps = sobolev_exponent(p, g.dim, m.alpha());
  const auto tt = tau_square(m, g);
  // Inverse of the p = 2 Hessian of the numerator; zero on the mean.
  std::vector<double> pre(tt.size());
  for (std::size_t i = 0; i < tt.size(); ++i) pre[i] = tt[i] > 0 ? 1 / (2 * tt[i]) : 0.0;

  const auto keep = flow_modes(g);
  for (std::size_t i = 0; i < pre.size(); ++i) pre[i] *= keep[i];

  FlowState s;
  s.f = normalized(apply_real_table(start, keep), ps);
  double Q = rayleigh_quotient(m, s.f, p);
  s.history.push_back(Q);
  s.steps.push_back(0);
  s.step = 1;
  while (s.iterations < opts.max_iter) {
    const Field grad = numerator_gradient(m, s.f, p, tt) - Q * denominator_gradient(s.f, p, ps);
    const Field dir = -1.0 * apply_real_table(grad, pre);
    double step = std::min(1.0, 2 * s.step), Qn = Q;
    Field fn;
    bool accepted = false;
    for (; step >= opts.min_step; step /= 2) {
      fn = normalized(s.f + step * dir, ps);
      Qn = rayleigh_quotient(m, fn, p);
      if (Qn < Q) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (euler_lagrange_residual(m, s.f, p) < 1e-6) {
        s.stop_reason = "stationary";
        return s;
      }
      fail(ErrorKind::Stalled, fmt::format("no decreasing step above {:g} at iteration {}", opts.min_step, s.iterations));
    }
    ++s.iterations;
    const double rel = (Q - Qn) / Q;
    s.f = std::move(fn);
    s.step = step;
    Q = Qn;
    s.history.push_back(Q);
    s.steps.push_back(step);
    if (rel < opts.rtol) {
      s.stop_reason = "converged";
      return s;
    }
  }
  s.stop_reason = "max_iter";
  return s;
}

OptimizeResult minimize_sobolev(const StableModel& m, const Grid& g, double p, const OptimizeOptions& opts) {
  if (m.dim() != g.dim) fail(ErrorKind::SizeMismatch, "model and grid dimensions differ");
  check_exponents(p, g.dim, m.alpha());
  OptimizeResult r;
  if (p != 2) r.warnings.push_back("p != 2: exploratory subgradient mode");

  std::vector<Field> starts;
  if (opts.initial) {
    if (opts.initial->grid != g) fail(ErrorKind::SizeMismatch, "initial field lives on another grid");
    starts.push_back(*opts.initial);
  } else {
    for (double w : opts.widths) starts.push_back(gaussian_bump(g, w * g.L));
  }
  r.starts.resize(starts.size());
  const int threads = std::max(1, opts.threads);
  for (std::size_t lo = 0; lo < starts.size(); lo += threads) {
    const std::size_t hi = std::min(starts.size(), lo + threads);
    std::vector<std::future<FlowState>> jobs;
    for (std::size_t i = lo; i < hi; ++i)
      jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                [&, i] { return run_flow(m, starts[i], p, opts); }));
    for (std::size_t i = lo; i < hi; ++i) r.starts[i] = jobs[i - lo].get();
  }
  const auto best = std::min_element(r.starts.begin(), r.starts.end(), [](const auto& a, const auto& b) {
    return a.history.back() < b.history.back();
  });
  r.best = *best;
  r.S_estimate = best->history.back();
  r.el_residual = euler_lagrange_residual(m, r.best.f, p, &r.multiplier);
  return r;
}

nlohmann::json OptimizeResult::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : starts)
    st.push_back({{"initial_quotient", s.history.front()},
                  {"final_quotient", s.history.back()},
                  {"iterations", s.iterations},
                  {"stop_reason", s.stop_reason}});
  return {{"S_estimate", S_estimate},
          {"bound", "upper"},
          {"el_residual", el_residual},
          {"multiplier", multiplier},
          {"iterations", best.iterations},
          {"stop_reason", best.stop_reason},
          {"starts", st},
          {"warnings", warnings}};
}

Field project_flow_modes(const Field& f) { return apply_real_table(f, flow_modes(f.grid)); }

Field radial_average(const Field& f) {
  const Grid& g = f.grid;
  const int d = g.dim;
  if (d < 2) fail(ErrorKind::UnsupportedDim, "radial average needs d >= 2");
  const double dr = g.h() / 2;
  const std::size_t n = g.size();
  std::vector<double> r(n);
  std::map<long, std::pair<double, std::pair<double, double>>> bins;  // sum f, (sum r, count)
  std::vector<int> j(d);
  for (std::size_t i = 0; i < n; ++i) {
    g.unravel(i, j.data());
    double s = 0;
    for (int k = 0; k < d; ++k) s += g.x(j[k]) * g.x(j[k]);
    r[i] = std::sqrt(s);
    auto& b = bins[std::lround(r[i] / dr)];
    b.first += f[i];
    b.second.first += r[i];
    b.second.second += 1;
  }
  std::vector<double> rr, vv;
  for (const auto& [k, b] : bins) {
    rr.push_back(b.second.first / b.second.second);
    vv.push_back(b.first / b.second.second);
  }
  Field out(g);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::upper_bound(rr.begin(), rr.end(), r[i]);
    if (it == rr.begin()) {
      out[i] = vv.front();
    } else if (it == rr.end()) {
      out[i] = vv.back();
    } else {
      const std::size_t b = it - rr.begin();
      const double w = (r[i] - rr[b - 1]) / (rr[b] - rr[b - 1]);
      out[i] = (1 - w) * vv[b - 1] + w * vv[b];
    }
  }
  return out;
}

void write_trace_csv(const FlowState& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::BadSpec, "cannot write " + path);
  os << "iteration,Q,step\n";
  for (std::size_t i = 0; i < s.history.size(); ++i) os << fmt::format("{},{:.17g},{:.17g}\n", i, s.history[i], s.steps[i]);
}

}  // namespace sf
