#ifndef BESSELHARDY_QUADRATURE_HPP
#define BESSELHARDY_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <vector>

namespace bh::quad {

// Gauss-Legendre rule on [-1, 1]; n must be one of 2, 4, 8, 16, 32.
struct Rule {
  std::vector<double> x, w;
};
const Rule& gauss_legendre(int n);

// Sum of f over the n-point rule mapped to [a, b].
template <class F>
double integrate_gl(const Rule& r, F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

// One non-adaptive Gauss-Kronrod 15 panel; *err receives |K15 - G7|.
template <class F>
double gk15(F&& f, double a, double b, double* err) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, err);
}

}  // namespace bh::quad

#endif
