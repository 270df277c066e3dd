#include "stablefrac/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "stablefrac/errors.hpp"

namespace sf {

Grid::Grid(int d, int n, double l) : dim(d), N(n), L(l) {
  if (d < 1 || d > 3) fail(ErrorKind::UnsupportedDim, "grid dimension must be 1, 2 or 3");
  if (n < 16 || n % 2) fail(ErrorKind::BadSpec, "points per axis must be an even integer >= 16");
  if (!(l > 0)) fail(ErrorKind::BadSpec, "half width must be > 0");
}

double Grid::cellvol() const { return std::pow(h(), dim); }

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int k = 0; k < dim; ++k) s *= static_cast<std::size_t>(N);
  return s;
}

double Grid::xi(int j) const { return std::numbers::pi * mode(j) / L; }

double Grid::xi_max() const { return std::numbers::pi * (N / 2) / L; }

void Grid::unravel(std::size_t idx, int* j) const {
  for (int k = dim - 1; k >= 0; --k) {
    j[k] = static_cast<int>(idx % N);
    idx /= N;
  }
}

std::size_t Grid::ravel(const int* j) const {
  std::size_t idx = 0;
  for (int k = 0; k < dim; ++k) idx = idx * N + j[k];
  return idx;
}

std::size_t Grid::conj_partner(std::size_t idx) const {
  int j[3];
  unravel(idx, j);
  for (int k = 0; k < dim; ++k)
    if (j[k] != N / 2) j[k] = (N - j[k]) % N;
  return ravel(j);
}

Field::Field(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
  if (v.size() != g.size()) fail(ErrorKind::SizeMismatch, "value array does not match grid size");
}

Field sample(const Grid& g, const std::function<double(const double*)>& f) {
  Field out(g);
  int j[3];
  double x[3];
  for (std::size_t i = 0; i < out.size(); ++i) {
    g.unravel(i, j);
    for (int k = 0; k < g.dim; ++k) x[k] = g.x(j[k]);
    out[i] = f(x);
  }
  return out;
}

namespace {
void same_grid(const Field& a, const Field& b) {
  if (a.grid != b.grid || a.size() != b.size()) fail(ErrorKind::SizeMismatch, "fields live on different grids");
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
  same_grid(a, b);
  Field o(a.grid);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = a[i] + b[i];
  return o;
}

Field operator-(const Field& a, const Field& b) {
  same_grid(a, b);
  Field o(a.grid);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = a[i] - b[i];
  return o;
}

Field operator*(double s, const Field& a) {
  Field o(a.grid);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = s * a[i];
  return o;
}

Field hadamard(const Field& a, const Field& b) {
  same_grid(a, b);
  Field o(a.grid);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = a[i] * b[i];
  return o;
}

double integral(const Field& f) {
  double s = 0;
  for (double x : f.v) s += x;
  return s * f.grid.cellvol();
}

double inner(const Field& a, const Field& b) {
  same_grid(a, b);
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid.cellvol();
}

double sup_abs(const Field& f) {
  double m = 0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double mean(const Field& f) {
  double s = 0;
  for (double x : f.v) s += x;
  return s / static_cast<double>(f.size());
}

Field euclid_norm(const VectorField& v) {
  Field o(v.grid);
  for (std::size_t i = 0; i < o.size(); ++i) {
    double s = 0;
    for (const auto& c : v.c) s += c[i] * c[i];
    o[i] = std::sqrt(s);
  }
  return o;
}

void write_sfld(const Field& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.write("SFLD", 4);
  const std::uint32_t version = 1, dim = f.grid.dim, n = f.grid.N;
  os.write(reinterpret_cast<const char*>(&version), 4);
  os.write(reinterpret_cast<const char*>(&dim), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&f.grid.L), 8);
  os.write(reinterpret_cast<const char*>(f.v.data()), static_cast<std::streamsize>(8 * f.size()));
}

Field read_sfld(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t version = 0, dim = 0, n = 0;
  double L = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&dim), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&L), 8);
  if (!is || std::memcmp(magic, "SFLD", 4) != 0 || version != 1)
    fail(ErrorKind::BadSpec, "not an SFLD v1 file: " + path);
  Field f(Grid(static_cast<int>(dim), static_cast<int>(n), L));
  is.read(reinterpret_cast<char*>(f.v.data()), static_cast<std::streamsize>(8 * f.size()));
  if (!is) fail(ErrorKind::SizeMismatch, "truncated SFLD payload: " + path);
  return f;
}

void write_field_csv(const Field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  for (int k = 0; k < f.grid.dim; ++k) os << "i" << k << ",";
  os << "value\n";
  int j[3];
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.grid.unravel(i, j);
    for (int k = 0; k < f.grid.dim; ++k) os << j[k] << ",";
    os << fmt::format("{:.17g}\n", f[i]);
  }
}

}  // namespace sf
