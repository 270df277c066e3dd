#pragma once

#include <vector>

#include <json.hpp>

#include "stablefrac/stable_model.hpp"

namespace sf {

// Standard one-dimensional symmetric stable density with characteristic function
// exp(-|xi|^alpha), alpha in (1, 2].
double density_1d(double alpha, double x);
double density_1d_deriv(double alpha, double x);

// Radial profile of the rotation-invariant density with characteristic function
// exp(-|xi|^alpha) in dimension d in {2, 3}, and its r-derivative.
double radial_density(double alpha, int d, double r);
double radial_density_deriv(double alpha, int d, double r);

// p_alpha(x) for the model. Product and rotation-invariant models use fast paths,
// other models the cone representation (d in {2, 3}).
double density_point(const StableModel& m, const double* x);
void density_grad(const StableModel& m, const double* x, double* out);

// Cone representation for any model with d in {2, 3}; `order` is the sphere rule size.
double density_cone(const StableModel& m, const double* x, int order = 0);
void density_cone_grad(const StableModel& m, const double* x, double* out, int order = 0);

// k_{alpha,T}(x) = -alpha * int_0^T t^(d-alpha) grad p_alpha(t x) dt. T = +inf allowed.
Vec kernel_kT(const StableModel& m, const double* x, double T);
// Kernel of -i xi / sum_k |xi_k|^alpha (product model with unit coefficients).
Vec kernel_axes(double alpha, int d, const double* x);
// V_alpha(x) = alpha * int_0^inf t^(d-alpha-1) p_alpha(t x) dt, d >= 2.
double potential_kernel(const StableModel& m, const double* x);

// E|Y|^p for the standard one-dimensional law, p in (-1, alpha).
double abs_moment(double alpha, double p);
// The same moment by quadrature of the density, with an analytic series tail.
double abs_moment_quadrature(double alpha, double p);
// int p_alpha,1 over the line by quadrature.
double density_1d_mass(double alpha);

// ||p_alpha||_inf = p_alpha(0).
double density_sup(const StableModel& m);
// ||grad p_alpha||_{L1} (Euclidean length of the gradient).
double grad_density_l1(const StableModel& m);
// ||grad p_alpha / p_alpha||_{L^p(mu_alpha)}.
double logderiv_lp(const StableModel& m, double p);

// {"E_abs_Y", "E_abs_Y_quadrature", "radial_mean", "p_sup", "grad_p_L1", "logderiv_Lp"}.
// The last two are omitted for models without a density derivative path.
nlohmann::json moments(const StableModel& m, const std::vector<double>& p_list);

// Number of density evaluations clamped at 1e-30 so far.
long density_clamp_count();

}  // namespace sf
