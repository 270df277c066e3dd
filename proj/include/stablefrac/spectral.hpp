#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "stablefrac/grid.hpp"
#include "stablefrac/stable_model.hpp"

namespace sf {

// spectrum(xi_m) = cellvol * sum_k f(x_k) exp(-i <x_k, xi_m>), stored in FFT order.
struct Spectrum {
  Grid grid;
  std::vector<cplx> v;
};

Spectrum fourier(const Field& f);
Field inverse_fourier(const Spectrum& s);

using ScalarSymbol = std::function<cplx(const double* xi)>;
using VectorSymbol = std::function<void(const double* xi, cplx* out)>;

// Symbols are made Hermitian on the grid before use: s(xi) <- (s(xi) + conj s(xi~))/2
// where xi~ is the conjugation partner of xi (see Grid::conj_partner). Off the Nyquist
// planes this is a no-op for Hermitian symbols; on them it drops the odd part.
Field apply_multiplier(const Field& f, const ScalarSymbol& s);
VectorField apply_vector_multiplier(const Field& f, const VectorSymbol& s);

// Per-grid symbol tables of a model, made Hermitian as above and cached.
struct SymbolTable {
  Grid grid;
  std::vector<double> sa;   // sigma_alpha^alpha
  std::vector<double> tau;  // Im tau_alpha, component-major (d blocks)
  std::vector<double> ms;   // Im m_sigma, component-major
  std::vector<double> xi;   // frequencies with Nyquist components zeroed, component-major
  std::vector<double> xn;   // |xi| (raw)
};
std::shared_ptr<const SymbolTable> symbol_table(const StableModel& m, const Grid& g);

// Multiplies the raw DFT of f by a real or imaginary table and transforms back.
Field apply_real_table(const Field& f, const std::vector<double>& t);
VectorField apply_imag_tables(const Field& f, const std::vector<double>& t, int comps);

Field semigroup(const StableModel& m, const Field& f, double t);
// Semigroup of the model at exponent 2 with multiplier exp(-t |xi|^2).
Field gaussian_semigroup(const Field& f, double t);
Field generator(const StableModel& m, const Field& f);
VectorField frac_gradient(const StableModel& m, const Field& f);
// Adjoint pairing <w, D f> = -<div w, f>; symbol sum_k tau_k w_k.
Field frac_divergence(const StableModel& m, const VectorField& w);
Field frac_power(const StableModel& m, const Field& f, double s);
Field resolvent_power(const StableModel& m, const Field& f, double s, double lam);
// Gamma-transform quadrature of the resolvent power with log-spaced time nodes.
Field resolvent_power_quadrature(const StableModel& m, const Field& f, double s, double lam,
                                 int nodes = 200);
VectorField riesz_sigma(const StableModel& m, const Field& f);
VectorField local_D_sigma(const StableModel& m, const Field& f);
VectorField riesz_alpha(const StableModel& m, const Field& f);
// Classical gradient (symbol i xi).
VectorField local_gradient(const Field& f);
Field riesz_potential(const Field& f, double s);
// Symbol |xi|^s, zero at the origin.
Field laplacian_power(const Field& f, double s);
Field riesz_polypotential(const Field& f, double alpha);
Field t_alpha_beta(const StableModel& ma, const StableModel& mb, const Field& f);
// |nabla_nu f| = sqrt(A(f^2) - 2 f A f), with f^2 formed without aliasing on a 2N grid.
Field gradient_length(const StableModel& m, const Field& f);
// Pointwise sigma_alpha of a vector field.
Field sigma_of_vector(const StableModel& m, const VectorField& v);

// Band-limited trigonometric interpolation onto a finer grid (factor 2).
Field upsample2(const Field& f);
// Every other sample of a field on a 2N grid.
Field downsample2(const Field& f);

struct NormSpec {
  enum class Kind { Lp, Sup, WeakLq, Lorentz, Besov, Morrey } kind = Kind::Lp;
  double p = 2;      // Lp exponent, Lorentz second index, Morrey r
  double q = 2;      // WeakLq exponent, Lorentz first index p*
  double s = 0;      // Besov smoothness
  double beta = 0;   // Morrey beta
  const StableModel* model = nullptr;  // Besov semigroup
  double tmin = 1e-4, tmax = 1e2;
  int nodes = 40;    // Besov t nodes / Morrey radii

  static NormSpec lp(double p) { NormSpec n; n.kind = Kind::Lp; n.p = p; return n; }
  static NormSpec sup() { NormSpec n; n.kind = Kind::Sup; return n; }
  static NormSpec weak(double q) { NormSpec n; n.kind = Kind::WeakLq; n.q = q; return n; }
  static NormSpec lorentz(double pstar, double p) {
    NormSpec n; n.kind = Kind::Lorentz; n.q = pstar; n.p = p; return n;
  }
  static NormSpec besov(double s, const StableModel& m, double tmin = 1e-4, double tmax = 1e2,
                        int nodes = 40) {
    NormSpec n; n.kind = Kind::Besov; n.s = s; n.model = &m; n.tmin = tmin; n.tmax = tmax;
    n.nodes = nodes; return n;
  }
  static NormSpec morrey(double r, double beta, int radii = 16) {
    NormSpec n; n.kind = Kind::Morrey; n.p = r; n.beta = beta; n.nodes = radii; return n;
  }
};

double functional_norm(const Field& f, const NormSpec& spec);
double lp_norm(const Field& f, double p);
double lp_norm(const VectorField& v, double p);  // of the Euclidean length

}  // namespace sf
