#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace sf {

using cplx = std::complex<double>;

// Periodic box [-L, L)^d with N samples per axis.
struct Grid {
  int dim = 1;
  int N = 64;
  double L = 8.0;

  Grid() = default;
  Grid(int d, int n, double l);

  double h() const { return 2 * L / N; }
  double cellvol() const;
  std::size_t size() const;
  double x(int k) const { return -L + k * h(); }
  // FFT-ordered index j -> signed mode m in [-N/2, N/2).
  int mode(int j) const { return j < N / 2 ? j : j - N; }
  double xi(int j) const;
  double xi_max() const;
  // Unpacks a row-major linear index into per-axis indices (axis 0 slowest).
  void unravel(std::size_t idx, int* j) const;
  std::size_t ravel(const int* j) const;
  // Index of the frequency that pairs with idx under conjugation: axes sitting at
  // the Nyquist index stay put, the others are negated.
  std::size_t conj_partner(std::size_t idx) const;

  bool operator==(const Grid& o) const { return dim == o.dim && N == o.N && L == o.L; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}
  Field(const Grid& g, std::vector<double> values);

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

struct VectorField {
  Grid grid;
  std::vector<std::vector<double>> c;  // one array per component

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g), c(g.dim, std::vector<double>(g.size(), 0.0)) {}
  Field component(int k) const { return Field(grid, c[k]); }
};

// Samples f at every grid point; f receives the point coordinates.
Field sample(const Grid& g, const std::function<double(const double*)>& f);

// Pointwise helpers.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field hadamard(const Field& a, const Field& b);
double integral(const Field& f);
double inner(const Field& a, const Field& b);
double sup_abs(const Field& f);
double mean(const Field& f);
Field euclid_norm(const VectorField& v);

// SFLD binary: "SFLD", u32 version, u32 dim, u32 N, f64 L, then row-major f64 samples.
void write_sfld(const Field& f, const std::string& path);
Field read_sfld(const std::string& path);
// CSV: one index column per axis, then value.
void write_field_csv(const Field& f, const std::string& path);

}  // namespace sf
