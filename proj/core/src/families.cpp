#include "besselhardy/families.hpp"

#include <cmath>

namespace bh {

SampledFunction2D TestFunction2D::sample(const HalfLineGrid& g1, const HalfLineGrid& g2) const {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(g1.size()), static_cast<Eigen::Index>(g2.size()));
  for (std::size_t i = 0; i < g1.size(); ++i)
    for (std::size_t j = 0; j < g2.size(); ++j)
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(g1[i], g2[j]);
  return SampledFunction2D(g1, g2, std::move(v));
}

namespace {

double gauss(double x, double c, double w) { return std::exp(-(x - c) * (x - c) / (w * w)); }
double box(double x, double a, double b) {
  return 0.25 * (1.0 + std::tanh(6.0 * (x - a))) * (1.0 + std::tanh(6.0 * (b - x)));
}
double cbump(double x, double c, double r) {
  const double s = (x - c) / r;
  return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
}

}  // namespace

const std::vector<TestFunction2D>& dashboard_family() {
  static const std::vector<TestFunction2D> fam = {
      {"gauss33", [](double x, double y) { return gauss(x, 3, 1) * gauss(y, 3, 1); }},
      {"gauss24", [](double x, double y) { return gauss(x, 2, 0.5) * gauss(y, 4, 0.7); }},
      {"smoothbox", [](double x, double y) { return box(x, 1, 3) * box(y, 1.5, 3.5); }},
      {"nearorigin", [](double x, double y) { return x * x * y * y * std::exp(-x * x - y * y); }},
      {"twobumps",
       [](double x, double y) {
         return gauss(x, 2, 0.5) * gauss(y, 2, 0.5) + gauss(x, 4, 0.5) * gauss(y, 3, 0.5);
       }},
      {"tilted",
       [](double x, double y) {
         const double u = (x - 3) + (y - 3), v = (x - 3) - (y - 3);
         return std::exp(-u * u / 2.0 - v * v / 0.5);
       }},
      {"modulated",
       [](double x, double y) { return gauss(x, 3, 1) * std::cos(3.0 * x) * gauss(y, 3, 1); }},
      {"signchange",
       [](double x, double y) { return (gauss(x, 2, 0.5) - gauss(x, 4, 0.5)) * gauss(y, 3, 1); }},
      {"ring",
       [](double x, double y) {
         const double r = std::hypot(x - 2.75, y - 2.75);
         return std::exp(-(r - 1.5) * (r - 1.5) / 0.25);
       }},
      {"compact", [](double x, double y) { return cbump(x, 3, 2) * cbump(y, 3, 2); }},
  };
  return fam;
}

const std::vector<TestFunction2D>& bump_family() {
  static const std::vector<TestFunction2D> fam = {
      {"bump3w1", [](double x, double y) { return gauss(x, 3, 1) * gauss(y, 3, 1); }},
      {"bump2w05", [](double x, double y) { return gauss(x, 2, 0.5) * gauss(y, 2, 0.5); }},
      {"bump4w1", [](double x, double y) { return gauss(x, 4, 1) * gauss(y, 3, 0.7); }},
  };
  return fam;
}

const std::vector<TestFunction2D>& symbol_family() {
  static const std::vector<TestFunction2D> fam = {
      {"const", [](double, double) { return 1.0; }},
      {"bump", [](double x, double y) { return gauss(x, 3, 1) * gauss(y, 3, 1); }},
      {"narrow", [](double x, double y) { return gauss(x, 2.5, 0.5) * gauss(y, 3.5, 0.5); }},
      {"logprod", [](double x, double y) { return std::log1p(x * y); }},
  };
  return fam;
}

}  // namespace bh
