#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sf {

using Vec = std::vector<double>;

// A point on the sphere with a quadrature (or atom) weight.
struct SphereNode {
  Vec y;
  double w;
};

// Full-sphere rule for the surface measure: d=1 the two points +-1, d=2 n uniform
// angles, d=3 Gauss-Legendre in z times 2n uniform longitudes.
std::vector<SphereNode> sphere_rule(int d, int n);

double sphere_area(int d);

// lambda1 = c_alpha(alpha) * sigma.
double c_alpha(double alpha);

// Density of the rotation-invariant sigma with respect to surface measure that makes
// sigma_alpha(xi) = |xi| / 2^(1/alpha).
double c_alpha_d(double alpha, int d);

// E|<theta, e1>|^p for theta uniform on the sphere.
double sphere_abs_moment(int d, double p);

struct Atom {
  Vec y;     // unit direction; -y is implied
  double w;  // weight of y (and of -y)
};

enum class WeightsOf { Lambda1, Sigma };

struct DiscreteSpec {
  std::vector<Atom> atoms;
  WeightsOf weights_of = WeightsOf::Lambda1;
};

// Rotation-invariant sigma of total mass `mass`; canonical=true picks c_alpha_d.
struct RotInvSpec {
  double mass = 1.0;
  bool canonical = false;
};

// sigma(dtheta) = rho(theta) surface(dtheta).
struct DensitySpec {
  std::function<double(const double*)> rho;
  int order = 0;  // 0 picks the default resolution
  nlohmann::json description;
};

// rho(y) = constant + sum_k axes[k] |y_k|^power, the JSON-expressible density family.
DensitySpec axis_power_density(double constant, const Vec& axes, double power, int order = 0);

using SpectralMeasure = std::variant<DiscreteSpec, RotInvSpec, DensitySpec>;

enum class ModelKind { Discrete, RotInv, Density };

struct ModelState {
  double alpha = 1.5;
  int dim = 1;
  ModelKind kind = ModelKind::Discrete;
  SpectralMeasure spec;
  std::optional<double> gamma;
  std::vector<SphereNode> nodes;
  bool product = false;
  Vec axis_a;
  double rot_k = 0, rot_mass = 0;
  double sigma_mass = 0;
  double margin = 0;
  std::uint64_t id = 0;
  // d=2 table of the dual norm on uniform angles, filled lazily
  mutable std::once_flag dual_once;
  mutable std::vector<double> dual_tab;
};

class StableModel {
 public:
  using Kind = ModelKind;

  double alpha() const { return s_->alpha; }
  int dim() const { return s_->dim; }
  Kind kind() const { return s_->kind; }
  // Discrete with exactly one atom per coordinate axis.
  bool is_product() const { return s_->product; }
  // sigma_alpha(e_k)^alpha per axis (product models only).
  const Vec& axis_coeffs() const { return s_->axis_a; }
  // sigma_alpha^alpha = rot_coeff * |xi|^alpha (rotation-invariant only).
  double rot_coeff() const { return s_->rot_k; }
  double rot_mass() const { return s_->rot_mass; }
  std::optional<double> gamma_exponent() const { return s_->gamma; }
  std::uint64_t id() const { return s_->id; }

  double sigma_alpha_pow(const double* xi) const;
  double sigma_alpha(const double* xi) const;
  double sigma_alpha(const Vec& xi) const { return sigma_alpha(xi.data()); }
  double sigma_alpha_dual(const double* x) const;
  double sigma_alpha_dual(const Vec& x) const { return sigma_alpha_dual(x.data()); }
  double psi(const double* xi) const { return -sigma_alpha_pow(xi); }
  // tau_alpha(xi) = i * out.
  void tau_im(const double* xi, double* out) const;
  // m_sigma(xi) = i * out.
  void m_sigma_im(const double* xi, double* out) const;
  // Row-major d x d.
  std::vector<double> sigma_matrix() const;
  // Throws SingularSigmaMatrix if the smallest eigenvalue is <= 1e-12.
  std::vector<double> sigma_matrix_checked() const;
  double nondeg_margin() const { return s_->margin; }
  double sigma_mass() const { return s_->sigma_mass; }
  double lambda1_mass() const { return c_alpha(alpha()) * s_->sigma_mass; }
  // Full-sphere lambda1 nodes; discrete atoms appear as +-y pairs.
  const std::vector<SphereNode>& lambda_nodes() const { return s_->nodes; }

  // Same spectral description at another alpha. Sigma-weighted and explicit-mass
  // specs keep sigma fixed; lambda1-weighted atoms keep lambda1 fixed; canonical
  // rotation-invariant specs are renormalized.
  StableModel with_alpha(double beta) const;

  nlohmann::json to_json() const;
  const SpectralMeasure& spec() const { return s_->spec; }

 private:
  explicit StableModel(std::shared_ptr<const ModelState> s) : s_(std::move(s)) {}
  std::shared_ptr<const ModelState> s_;
  friend StableModel make_model(double, int, SpectralMeasure, std::optional<double>);
};



StableModel make_model(double alpha, int dim, SpectralMeasure spec,
                       std::optional<double> gamma = std::nullopt);

// Convenience constructors.
StableModel product_model(double alpha, const Vec& lambda_weights);
StableModel rotational_model(double alpha, int dim);  // canonical normalization
StableModel rotational_model_mass(double alpha, int dim, double sigma_mass);

StableModel model_from_json(const nlohmann::json& j);

struct GeometryConstants {
  double vol_K = 0;        // {sigma_alpha <= 1}
  double vol_K_polar = 0;  // {sigma_alpha_dual <= 1}
  double sigma_alpha_sphere_integral = 0;  // integral of sigma_alpha over the sphere
};

GeometryConstants geometry_constants(const StableModel& m);

// integral of ||y|| over the stable law mu_alpha.
double radial_mean(const StableModel& m);

}  // namespace sf
