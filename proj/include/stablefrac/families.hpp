#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stablefrac/grid.hpp"

namespace sf {

struct TestFunction {
  std::string name;
  Field f;
};

// The ten-function default family: Gaussian bumps at widths 0.5, 1, 1.5; an
// anisotropic product bump; a bump carrying a narrow shifted bump; a smoothed
// indicator of [-1.5, 1.5]^d; two random band-limited fields; translates of the
// unit bump and of the first random field. All are evaluated analytically, so the
// translates are exact off the grid lattice.
std::vector<TestFunction> default_family(const Grid& g, std::uint64_t seed);

// exp(-|x - c|^2 / (2 s^2)); empty c means the origin.
Field gaussian_bump(const Grid& g, double s, const std::vector<double>& c = {});

}  // namespace sf
