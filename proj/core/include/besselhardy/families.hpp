#ifndef BESSELHARDY_FAMILIES_HPP
#define BESSELHARDY_FAMILIES_HPP

#include "besselhardy/grids.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bh {

// A named test function on (0, inf)^2.
struct TestFunction2D {
  std::string name;
  std::function<double(double, double)> f;
  SampledFunction2D sample(const HalfLineGrid& g1, const HalfLineGrid& g2) const;
};

// Ten smooth functions supported (numerically) in [0.25, 5.5]^2: separable and
// non-separable bumps, a sign change, an oscillation, a ring.
const std::vector<TestFunction2D>& dashboard_family();
// Separable Gaussian bumps used for the atomic decomposition.
const std::vector<TestFunction2D>& bump_family();
// Symbols for the commutator sweep; the first is the constant 1.
const std::vector<TestFunction2D>& symbol_family();

}  // namespace bh

#endif
