#include "stablefrac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <fftw3.h>

#include "stablefrac/errors.hpp"

namespace sf {

namespace {

constexpr double kPi = std::numbers::pi;

// FFTW plans are created once per (dim, N, sign) under a lock and executed on
// caller buffers with the new-array interface. ESTIMATE keeps results reproducible.
class PlanCache {
 public:
  fftw_plan get(int d, int n, int sign) {
    std::lock_guard<std::mutex> lk(mu_);
    auto key = std::make_tuple(d, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    int dims[3];
    for (int k = 0; k < d; ++k) {
      dims[k] = n;
      total *= n;
    }
    fftw_complex* buf = fftw_alloc_complex(total);
    fftw_plan p = fftw_plan_dft(d, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache c;
  return c;
}

void fft_inplace(const Grid& g, std::vector<cplx>& a, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(plans().get(g.dim, g.N, sign), p, p);
}

std::vector<cplx> raw_forward(const Field& f) {
  if (f.v.size() != f.grid.size()) fail(ErrorKind::SizeMismatch, "field size does not match grid");
  std::vector<cplx> a(f.v.begin(), f.v.end());
  fft_inplace(f.grid, a, FFTW_FORWARD);
  return a;
}

// Backward transform with 1/N^d scaling; certifies the imaginary residue against
// `ref`, an upper bound on the output magnitude.
Field raw_inverse_real(const Grid& g, std::vector<cplx>& a, double ref) {
  fft_inplace(g, a, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(g.size());
  Field out(g);
  double im = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i].real() * scale;
    im = std::max(im, std::abs(a[i].imag()) * scale);
  }
  if (im > 1e-8 * ref && im > 1e-300)
    fail(ErrorKind::NonHermitianOutput, "imaginary residue " + std::to_string(im) + " exceeds 1e-8 of output bound");
  return out;
}

double l1_over_n(const std::vector<cplx>& a, const Grid& g) {
  double s = 0;
  for (const auto& c : a) s += std::abs(c);
  return s / static_cast<double>(g.size());
}

void frequency(const Grid& g, std::size_t idx, double* xi) {
  int j[3];
  g.unravel(idx, j);
  for (int k = 0; k < g.dim; ++k) xi[k] = g.xi(j[k]);
}

void hermitian_even(const Grid& g, std::vector<double>& t, std::size_t off = 0) {
  const std::size_t n = g.size();
  std::vector<double> c(t.begin() + off, t.begin() + off + n);
  for (std::size_t i = 0; i < n; ++i) t[off + i] = 0.5 * (c[i] + c[g.conj_partner(i)]);
}

void hermitian_odd(const Grid& g, std::vector<double>& t, std::size_t off = 0) {
  const std::size_t n = g.size();
  std::vector<double> c(t.begin() + off, t.begin() + off + n);
  for (std::size_t i = 0; i < n; ++i) t[off + i] = 0.5 * (c[i] - c[g.conj_partner(i)]);
}

struct TableKey {
  std::uint64_t id;
  int d, n;
  double L;
  bool operator<(const TableKey& o) const {
    return std::tie(id, d, n, L) < std::tie(o.id, o.d, o.n, o.L);
  }
};

}  // namespace

Spectrum fourier(const Field& f) {
  Spectrum s{f.grid, raw_forward(f)};
  const double cv = f.grid.cellvol();
  int j[3];
  for (std::size_t i = 0; i < s.v.size(); ++i) {
    f.grid.unravel(i, j);
    int par = 0;
    for (int k = 0; k < f.grid.dim; ++k) par += j[k];
    s.v[i] *= (par % 2 ? -cv : cv);
  }
  return s;
}

Field inverse_fourier(const Spectrum& s) {
  if (s.v.size() != s.grid.size()) fail(ErrorKind::SizeMismatch, "spectrum size does not match grid");
  std::vector<cplx> a(s.v);
  const double cv = s.grid.cellvol();
  int j[3];
  for (std::size_t i = 0; i < a.size(); ++i) {
    s.grid.unravel(i, j);
    int par = 0;
    for (int k = 0; k < s.grid.dim; ++k) par += j[k];
    a[i] *= (par % 2 ? -1.0 : 1.0) / cv;
  }
  return raw_inverse_real(s.grid, a, l1_over_n(a, s.grid));
}

Field apply_multiplier(const Field& f, const ScalarSymbol& s) {
  const Grid& g = f.grid;
  auto a = raw_forward(f);
  std::vector<cplx> sym(a.size());
  double xi[3];
  for (std::size_t i = 0; i < a.size(); ++i) {
    frequency(g, i, xi);
    sym[i] = s(xi);
    if (!std::isfinite(sym[i].real()) || !std::isfinite(sym[i].imag()))
      fail(ErrorKind::BadSpec, "symbol is not finite at a grid frequency");
  }
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= 0.5 * (sym[i] + std::conj(sym[g.conj_partner(i)]));
  return raw_inverse_real(g, a, l1_over_n(a, g));
}

VectorField apply_vector_multiplier(const Field& f, const VectorSymbol& s) {
  const Grid& g = f.grid;
  const int d = g.dim;
  const auto a = raw_forward(f);
  std::vector<cplx> sym(a.size() * d);
  double xi[3];
  for (std::size_t i = 0; i < a.size(); ++i) {
    frequency(g, i, xi);
    s(xi, &sym[i * d]);
  }
  VectorField out(g);
  for (int k = 0; k < d; ++k) {
    std::vector<cplx> b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      b[i] = a[i] * 0.5 * (sym[i * d + k] + std::conj(sym[g.conj_partner(i) * d + k]));
    out.c[k] = raw_inverse_real(g, b, l1_over_n(b, g)).v;
  }
  return out;
}

std::shared_ptr<const SymbolTable> symbol_table(const StableModel& m, const Grid& g) {
  static std::mutex mu;
  static std::map<TableKey, std::shared_ptr<const SymbolTable>> cache;
  if (m.dim() != g.dim) fail(ErrorKind::SizeMismatch, "model and grid dimensions differ");
  const TableKey key{m.id(), g.dim, g.N, g.L};
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto t = std::make_shared<SymbolTable>();
  t->grid = g;
  const std::size_t n = g.size();
  const int d = g.dim;
  t->sa.resize(n);
  t->xn.resize(n);
  t->tau.resize(n * d);
  t->ms.resize(n * d);
  t->xi.resize(n * d);
  double xi[3], tv[3], mv[3];
  int j[3];
  for (std::size_t i = 0; i < n; ++i) {
    frequency(g, i, xi);
    g.unravel(i, j);
    t->sa[i] = m.sigma_alpha_pow(xi);
    m.tau_im(xi, tv);
    m.m_sigma_im(xi, mv);
    double r2 = 0;
    for (int k = 0; k < d; ++k) {
      t->tau[k * n + i] = tv[k];
      t->ms[k * n + i] = mv[k];
      t->xi[k * n + i] = j[k] == g.N / 2 ? 0.0 : xi[k];
      r2 += xi[k] * xi[k];
    }
    t->xn[i] = std::sqrt(r2);
  }
  hermitian_even(g, t->sa);
  for (int k = 0; k < d; ++k) {
    hermitian_odd(g, t->tau, k * n);
    hermitian_odd(g, t->ms, k * n);
  }
  std::lock_guard<std::mutex> lk(mu);
  if (cache.size() > 64) cache.clear();
  cache.emplace(key, t);
  return t;
}

Field apply_real_table(const Field& f, const std::vector<double>& t) {
  auto a = raw_forward(f);
  if (t.size() < a.size()) fail(ErrorKind::SizeMismatch, "symbol table smaller than grid");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= t[i];
  return raw_inverse_real(f.grid, a, l1_over_n(a, f.grid));
}

VectorField apply_imag_tables(const Field& f, const std::vector<double>& t, int comps) {
  const auto a = raw_forward(f);
  const std::size_t n = a.size();
  VectorField out(f.grid);
  out.c.resize(comps);
  for (int k = 0; k < comps; ++k) {
    std::vector<cplx> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = a[i] * cplx(0.0, t[k * n + i]);
    out.c[k] = raw_inverse_real(f.grid, b, l1_over_n(b, f.grid)).v;
  }
  return out;
}

Field semigroup(const StableModel& m, const Field& f, double t) {
  if (t < 0 || !std::isfinite(t)) fail(ErrorKind::NegativeTime, "semigroup time must be >= 0");
  auto tab = symbol_table(m, f.grid);
  std::vector<double> s(tab->sa.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(-t * tab->sa[i]);
  return apply_real_table(f, s);
}

Field gaussian_semigroup(const Field& f, double t) {
  if (t < 0 || !std::isfinite(t)) fail(ErrorKind::NegativeTime, "semigroup time must be >= 0");
  return apply_multiplier(f, [&](const double* xi) {
    double r2 = 0;
    for (int k = 0; k < f.grid.dim; ++k) r2 += xi[k] * xi[k];
    return cplx(std::exp(-t * r2), 0.0);
  });
}

Field generator(const StableModel& m, const Field& f) {
  auto tab = symbol_table(m, f.grid);
  std::vector<double> s(tab->sa.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = -tab->sa[i];
  return apply_real_table(f, s);
}

VectorField frac_gradient(const StableModel& m, const Field& f) {
  auto tab = symbol_table(m, f.grid);
  return apply_imag_tables(f, tab->tau, f.grid.dim);
}

Field frac_divergence(const StableModel& m, const VectorField& w) {
  const Grid& g = w.grid;
  auto tab = symbol_table(m, g);
  const std::size_t n = g.size();
  std::vector<cplx> acc(n, 0.0);
  for (int k = 0; k < g.dim; ++k) {
    auto a = raw_forward(Field(g, w.c[k]));
    for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * cplx(0.0, tab->tau[k * n + i]);
  }
  return raw_inverse_real(g, acc, l1_over_n(acc, g));
}

Field frac_power(const StableModel& m, const Field& f, double s) {
  if (!(s > 0) || !std::isfinite(s)) fail(ErrorKind::BadExponent, "frac_power needs s > 0");
  auto tab = symbol_table(m, f.grid);
  std::vector<double> t(tab->sa.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = tab->sa[i] > 0 ? std::pow(tab->sa[i], s) : 0.0;
  return apply_real_table(f, t);
}

Field resolvent_power(const StableModel& m, const Field& f, double s, double lam) {
  if (!(s > 0) || !(lam > 0)) fail(ErrorKind::BadExponent, "resolvent_power needs s > 0 and lam > 0");
  auto tab = symbol_table(m, f.grid);
  std::vector<double> t(tab->sa.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::pow(lam + tab->sa[i], -s / 2);
  return apply_real_table(f, t);
}

Field resolvent_power_quadrature(const StableModel& m, const Field& f, double s, double lam,
                                 int nodes) {
  if (!(s > 0) || !(lam > 0)) fail(ErrorKind::BadExponent, "resolvent_power needs s > 0 and lam > 0");
  // t = e^u, trapezoid in u over a range where the integrand is negligible outside
  const double a = s / 2;
  const double umin = std::log(1e-14) / a - 2.0;
  const double umax = std::log(60.0 / lam);
  const double du = (umax - umin) / (nodes - 1);
  Field acc(f.grid);
  for (int k = 0; k < nodes; ++k) {
    const double u = umin + k * du;
    const double t = std::exp(u);
    const double w = (k == 0 || k == nodes - 1 ? 0.5 : 1.0) * du * std::exp(-lam * t) * std::pow(t, a);
    Field pt = semigroup(m, f, t);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * pt[i];
  }
  return (1.0 / std::tgamma(a)) * acc;
}

VectorField riesz_sigma(const StableModel& m, const Field& f) {
  auto tab = symbol_table(m, f.grid);
  return apply_imag_tables(f, tab->ms, f.grid.dim);
}

VectorField local_D_sigma(const StableModel& m, const Field& f) {
  auto tab = symbol_table(m, f.grid);
  const auto S = m.sigma_matrix();
  const int d = f.grid.dim;
  const std::size_t n = f.grid.size();
  std::vector<double> t(n * d, 0.0);
  for (int l = 0; l < d; ++l)
    for (int k = 0; k < d; ++k)
      for (std::size_t i = 0; i < n; ++i) t[l * n + i] += S[l * d + k] * tab->xi[k * n + i];
  return apply_imag_tables(f, t, d);
}

VectorField riesz_alpha(const StableModel& m, const Field& f) {
  auto tab = symbol_table(m, f.grid);
  const int d = f.grid.dim;
  const std::size_t n = f.grid.size();
  const double e = (m.alpha() - 1) / m.alpha();
  std::vector<double> t(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (tab->sa[i] <= 0) continue;
    const double c = std::pow(tab->sa[i], -e);
    for (int k = 0; k < d; ++k) t[k * n + i] = tab->tau[k * n + i] * c;
  }
  return apply_imag_tables(f, t, d);
}

VectorField local_gradient(const Field& f) {
  const Grid& g = f.grid;
  const int d = g.dim;
  const std::size_t n = g.size();
  std::vector<double> t(n * d);
  int j[3];
  for (std::size_t i = 0; i < n; ++i) {
    g.unravel(i, j);
    for (int k = 0; k < d; ++k) t[k * n + i] = j[k] == g.N / 2 ? 0.0 : g.xi(j[k]);
  }
  return apply_imag_tables(f, t, d);
}

namespace {
std::vector<double> radial_table(const Grid& g, const std::function<double(double)>& fn) {
  std::vector<double> t(g.size());
  double xi[3];
  for (std::size_t i = 0; i < t.size(); ++i) {
    frequency(g, i, xi);
    double r2 = 0;
    for (int k = 0; k < g.dim; ++k) r2 += xi[k] * xi[k];
    t[i] = r2 > 0 ? fn(std::sqrt(r2)) : 0.0;
  }
  return t;
}
}  // namespace

Field riesz_potential(const Field& f, double s) {
  if (!(s > 0 && s < f.grid.dim)) fail(ErrorKind::BadExponent, "riesz_potential needs s in (0, d)");
  double sq = 0;
  for (double x : f.v) sq += x * x;
  const double rms = std::sqrt(sq / static_cast<double>(f.size()));
  if (std::abs(mean(f)) > 1e-8 * std::max(rms, 1e-300))
    fail(ErrorKind::MeanNotZero, "Riesz potential input must have zero mean");
  return apply_real_table(f, radial_table(f.grid, [s](double r) { return std::pow(r, -s); }));
}

Field laplacian_power(const Field& f, double s) {
  return apply_real_table(f, radial_table(f.grid, [s](double r) { return std::pow(r, s); }));
}

Field riesz_polypotential(const Field& f, double alpha) {
  const Grid& g = f.grid;
  const double e = -(alpha - 1) / g.dim;
  std::vector<double> t(g.size());
  double xi[3];
  for (std::size_t i = 0; i < t.size(); ++i) {
    frequency(g, i, xi);
    double v = 1;
    for (int k = 0; k < g.dim; ++k) v = xi[k] == 0 ? 0.0 : v * std::pow(std::abs(xi[k]), e);
    t[i] = v;
  }
  return apply_real_table(f, t);
}

Field t_alpha_beta(const StableModel& ma, const StableModel& mb, const Field& f) {
  if (ma.dim() != mb.dim()) fail(ErrorKind::SizeMismatch, "t_alpha_beta needs models of equal dimension");
  auto ta = symbol_table(ma, f.grid);
  auto tb = symbol_table(mb, f.grid);
  const double a = ma.alpha(), b = mb.alpha();
  std::vector<double> t(ta->sa.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = std::pow(1 + tb->sa[i], (b - 1) / b) / std::pow(1 + ta->sa[i], (a - 1) / a);
  return apply_real_table(f, t);
}

Field upsample2(const Field& f) {
  const Grid& g = f.grid;
  const Grid G(g.dim, 2 * g.N, g.L);
  const auto a = raw_forward(f);
  std::vector<cplx> b(G.size(), 0.0);
  const double gain = std::pow(2.0, g.dim);
  int j[3];
  for (std::size_t i = 0; i < a.size(); ++i) {
    g.unravel(i, j);
    // each Nyquist axis splits the coefficient between modes -N/2 and +N/2
    int targets[3][2], cnt[3];
    double w = gain;
    for (int k = 0; k < g.dim; ++k) {
      const int m = g.mode(j[k]);
      if (j[k] == g.N / 2) {
        targets[k][0] = G.N - g.N / 2;
        targets[k][1] = g.N / 2;
        cnt[k] = 2;
        w *= 0.5;
      } else {
        targets[k][0] = m >= 0 ? m : G.N + m;
        cnt[k] = 1;
      }
    }
    int c[3] = {0, 0, 0};
    while (true) {
      int J[3];
      for (int k = 0; k < g.dim; ++k) J[k] = targets[k][c[k]];
      b[G.ravel(J)] += w * a[i];
      int k = g.dim - 1;
      while (k >= 0 && ++c[k] == cnt[k]) c[k--] = 0;
      if (k < 0) break;
    }
  }
  return raw_inverse_real(G, b, l1_over_n(b, G));
}

Field downsample2(const Field& f) {
  const Grid& G = f.grid;
  const Grid g(G.dim, G.N / 2, G.L);
  Field out(g);
  int j[3], J[3];
  for (std::size_t i = 0; i < out.size(); ++i) {
    g.unravel(i, j);
    for (int k = 0; k < g.dim; ++k) J[k] = 2 * j[k];
    out[i] = f[G.ravel(J)];
  }
  return out;
}

Field gradient_length(const StableModel& m, const Field& f) {
  const Field fine = upsample2(f);
  const Field sq = hadamard(fine, fine);
  const Field a_sq = generator(m, sq);
  const Field a_f = generator(m, fine);
  Field gam(fine.grid);
  for (std::size_t i = 0; i < gam.size(); ++i) gam[i] = a_sq[i] - 2 * fine[i] * a_f[i];
  Field out = downsample2(gam);
  for (auto& v : out.v) v = std::sqrt(std::max(0.0, v));
  return out;
}

Field sigma_of_vector(const StableModel& m, const VectorField& v) {
  Field out(v.grid);
  const int d = v.grid.dim;
  double x[3];
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int k = 0; k < d; ++k) x[k] = v.c[k][i];
    out[i] = m.sigma_alpha(x);
  }
  return out;
}

double lp_norm(const Field& f, double p) {
  if (std::isinf(p)) return sup_abs(f);
  double s = 0;
  for (double x : f.v) s += std::pow(std::abs(x), p);
  return std::pow(s * f.grid.cellvol(), 1 / p);
}

double lp_norm(const VectorField& v, double p) { return lp_norm(euclid_norm(v), p); }

namespace {

std::vector<double> sorted_abs_desc(const Field& f) {
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f[i]);
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

double morrey(const Field& f, double r, double beta, int radii) {
  const Grid& g = f.grid;
  Field fr(g);
  for (std::size_t i = 0; i < fr.size(); ++i) fr[i] = std::pow(std::abs(f[i]), r);
  const auto a = raw_forward(fr);
  const double rmin = g.h(), rmax = g.L / 2;
  double best = 0;
  int j[3];
  for (int q = 0; q < radii; ++q) {
    const double R = rmin * std::pow(rmax / rmin, radii == 1 ? 0.0 : q / (radii - 1.0));
    Field ball(g);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      g.unravel(i, j);
      double r2 = 0;
      for (int k = 0; k < g.dim; ++k) {
        const double dx = g.mode(j[k]) * g.h();
        r2 += dx * dx;
      }
      ball[i] = r2 < R * R ? g.cellvol() : 0.0;
    }
    auto b = raw_forward(ball);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] *= a[i];
    Field conv = raw_inverse_real(g, b, l1_over_n(b, g));
    const double mx = *std::max_element(conv.v.begin(), conv.v.end());
    best = std::max(best, std::pow(R, beta - g.dim) * mx);
  }
  return std::pow(best, 1 / r);
}

}  // namespace

double functional_norm(const Field& f, const NormSpec& sp) {
  using K = NormSpec::Kind;
  const double cv = f.grid.cellvol();
  switch (sp.kind) {
    case K::Lp:
      if (!(sp.p >= 1)) fail(ErrorKind::BadSpec, "Lp needs p >= 1");
      return lp_norm(f, sp.p);
    case K::Sup:
      return sup_abs(f);
    case K::WeakLq: {
      if (!(sp.q >= 1)) fail(ErrorKind::BadSpec, "weak Lq needs q >= 1");
      const auto a = sorted_abs_desc(f);
      double best = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (k + 1 < a.size() && a[k + 1] == a[k]) continue;  // take the last of a tie run
        best = std::max(best, a[k] * std::pow((k + 1) * cv, 1 / sp.q));
      }
      return best;
    }
    case K::Lorentz: {
      const double ps = sp.q, p = sp.p;
      if (!(ps >= 1 && p >= 1)) fail(ErrorKind::BadSpec, "Lorentz needs indices >= 1");
      const auto a = sorted_abs_desc(f);
      // F(t) = k * cv on [a_k+1, a_k)
      double s = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double lo = k + 1 < a.size() ? a[k + 1] : 0.0;
        s += std::pow((k + 1) * cv, p / ps) * (std::pow(a[k], p) - std::pow(lo, p)) / p;
      }
      return std::pow(ps * s, 1 / p);
    }
    case K::Besov: {
      if (!sp.model) fail(ErrorKind::BadSpec, "Besov norm needs a model");
      if (!(sp.tmin > 0 && sp.tmax > sp.tmin && sp.nodes >= 2)) fail(ErrorKind::BadSpec, "bad Besov t-grid");
      const double a = sp.model->alpha();
      auto tab = symbol_table(*sp.model, f.grid);
      const auto F = raw_forward(f);
      double best = 0;
      for (int k = 0; k < sp.nodes; ++k) {
        const double t = sp.tmin * std::pow(sp.tmax / sp.tmin, k / (sp.nodes - 1.0));
        std::vector<cplx> b(F);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] *= std::exp(-t * tab->sa[i]);
        Field pt = raw_inverse_real(f.grid, b, l1_over_n(b, f.grid));
        best = std::max(best, std::pow(t, -sp.s / a) * sup_abs(pt));
      }
      return best;
    }
    case K::Morrey:
      if (!(sp.p >= 1) || !(sp.beta >= 0 && sp.beta <= f.grid.dim) || sp.nodes < 1)
        fail(ErrorKind::BadSpec, "Morrey needs r >= 1 and beta in [0, d]");
      return morrey(f, sp.p, sp.beta, sp.nodes);
  }
  fail(ErrorKind::BadSpec, "unknown norm kind");
}

}  // namespace sf
