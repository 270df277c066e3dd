#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stablefrac/grid.hpp"
#include "stablefrac/stable_model.hpp"

namespace sf {

// p* = pd / (d - p(alpha - 1)).
double sobolev_exponent(double p, int d, double alpha);

// ||D f||_p^p / ||f||_{p*}^p. Throws ZeroField, BadExponents.
double rayleigh_quotient(const StableModel& m, const Field& f, double p);

struct FlowState {
  Field f;
  std::vector<double> history;  // quotient after each accepted step, history[0] the start
  std::vector<double> steps;    // accepted step sizes, steps[0] = 0
  double step = 1;
  int iterations = 0;
  std::string stop_reason;
};

struct OptimizeOptions {
  int max_iter = 10000;
  double rtol = 1e-8;
  double min_step = 1e-12;
  // Initial Gaussian widths as fractions of L; ignored when `initial` is set.
  std::vector<double> widths{1.0 / 8, 1.0 / 12, 1.0 / 5};
  std::optional<Field> initial;
  int threads = 1;
};

struct OptimizeResult {
  double S_estimate = 0;  // best quotient: an upper bound for the continuum constant
  FlowState best;
  std::vector<FlowState> starts;
  double el_residual = 0;
  double multiplier = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;  // summary without fields
};

// Preconditioned descent on the quotient restricted to the modes where the grid symbol
// of D is nonzero and complete (no mean, no Nyquist planes), renormalized to
// ||f||_{p*} = 1 after every step, with a halving line search. Throws Stalled when
// no decreasing step exists above opts.min_step.
OptimizeResult minimize_sobolev(const StableModel& m, const Grid& g, double p,
                                const OptimizeOptions& opts = {});
FlowState run_flow(const StableModel& m, const Field& start, double p, const OptimizeOptions& opts);

// ||g - mu dM||_2 / ||g||_2 with g the gradient of ||D f||_p^p, dM that of
// ||f||_{p*}^p, both projected onto the flow modes, and mu the least-squares multiplier.
double euler_lagrange_residual(const StableModel& m, const Field& f, double p, double* mu = nullptr);

// Removes the mean and every Nyquist-plane mode: the subspace the flow works in.
Field project_flow_modes(const Field& f);

// Average over circles (d = 2) or spheres (d = 3) about the origin, interpolated
// back to the grid.
Field radial_average(const Field& f);

void write_trace_csv(const FlowState& s, const std::string& path);

}  // namespace sf
