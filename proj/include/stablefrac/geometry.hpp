#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stablefrac/grid.hpp"
#include "stablefrac/stable_model.hpp"

namespace sf {

struct Hyperrectangle {
  Vec half;    // half-widths a_k
  Vec center;  // empty means origin
};

// {||x - c||_q <= r}, q = INFINITY allowed.
struct LqBall {
  double q = 2;
  double radius = 1;
  Vec center;
};

// r * polar body: {sigma_alpha_dual(x - c) <= r}.
struct SigmaDualBall {
  StableModel model;
  double radius = 1;
  Vec center;
};

struct Mask {
  Field indicator;
};

using Shape = std::variant<Hyperrectangle, LqBall, SigmaDualBall, Mask>;

// Hard 0/1 indicator. Rectangles are half-open per axis, [c-a, c+a), so the cell
// count reproduces the exact volume when the edges sit on grid points.
Field rasterize(const Shape& s, const Grid& g);

// Closed-form volume where available, otherwise nullopt.
std::optional<double> volume_exact(const Shape& s, int dim);
// Closed form if available, else cell count times cell volume.
double volume(const Shape& s, const Grid& g);

// Integral over the boundary of sigma_alpha(outer normal).
double surface_perimeter_aniso(const StableModel& m, const Shape& s);
// Euclidean surface measure of the boundary.
double surface_perimeter_euclid(const Shape& s, int dim);

// Semigroup acting on grid fields: (f, t) -> P_t f.
using Evolution = std::function<Field(const Field&, double)>;
Evolution stable_evolution(const StableModel& m);
// Multiplier exp(-t |xi|^2).
Evolution gaussian_evolution();

// <P_t 1_A, 1_B>.
double heat_content(const StableModel& m, const Grid& g, const Shape& a, const Shape& b, double t);
// K_t(A, A^c) = |A| - <P_t 1_A, 1_A>, |A| the cell volume of the raster.
double heat_content_complement(const Evolution& ev, const Field& indicator, double t);

struct PerimeterStudy {
  std::vector<double> t;
  std::vector<double> value;
  double limit = 0;      // extrapolated to t = 0
  double rate_coef = 0;  // coefficient of the rate term
  double residual = 0;   // rms residual of the fit
  bool monotone = true;  // values nonincreasing in t (1e-6 slack)
};

// Both require a strictly decreasing t sequence of >= 4 values whose smallest entry
// satisfies t^(1/alpha) * xi_max >= 4.
PerimeterStudy perimeter_frac(const StableModel& m, const Grid& g, const Shape& s,
                              const std::vector<double>& ts);
PerimeterStudy perimeter_cl(const StableModel& m, const Grid& g, const Shape& s,
                            const std::vector<double>& ts);

struct SlopeFit {
  std::vector<double> t;
  std::vector<double> K;          // raw values on the given grid
  std::vector<double> K_refined;  // after the mesh Richardson step
  double slope = 0;            // limit of K_t / t^(1/alpha)
  double slope_stderr = 0;
  double loglog_exponent = 0;  // least-squares slope of log K vs log t
  double reference = 0;        // NaN when no closed form
  double ratio = 0;
  double residual = 0;
};

// K_t is computed on the grid and on the half-resolution raster of the same shape,
// combined as (4 K_h - K_2h)/3, then K_t/t^(1/alpha) is fitted by least squares on
// {1, t^e1, t^e2, t^e3}: the three smallest positive values of i(1-1/alpha) + j/alpha.
// The constant term is the slope. Needs >= 5 t values.
SlopeFit heat_content_slope(const StableModel& m, const Grid& g, const Shape& s,
                            const std::vector<double>& ts);
// Same with the Gaussian semigroup exp(-t|xi|^2) (exponent 2).
SlopeFit gaussian_heat_content_slope(const Grid& g, const Shape& s, const std::vector<double>& ts);
// Generic driver: fits K_t(E,E^c) for the evolution at exponent `alpha`.
SlopeFit fit_heat_content(const Evolution& ev, double alpha, const Grid& g, const Shape& s,
                          const std::vector<double>& ts);

struct IsoConstants {
  double C1 = 0;  // fractional perimeter
  double C2 = 0;  // classical perimeter
};
IsoConstants isoperimetric_constants(const StableModel& m);

nlohmann::json to_json(const PerimeterStudy& p);
nlohmann::json to_json(const SlopeFit& f);

// Checks the t-sequence contract shared by the perimeter and slope studies.
void check_t_sequence(const std::vector<double>& ts, double alpha, const Grid& g);

// Exponents of the correction terms used by the slope fit.
std::vector<double> slope_fit_exponents(double alpha);

}  // namespace sf
