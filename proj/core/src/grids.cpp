#include "besselhardy/grids.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bh {

HalfLineGrid::HalfLineGrid(std::vector<double> pts, GridKind kind, OriginCell origin)
    : points_(std::move(pts)), kind_(kind), origin_(origin) {
  const std::size_t n = points_.size();
  if (n < 2) throw std::invalid_argument("HalfLineGrid needs at least 2 points");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(points_[i]) || points_[i] <= 0.0)
      throw std::invalid_argument("HalfLineGrid points must be finite and positive");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw std::invalid_argument("HalfLineGrid points must be strictly increasing (index " +
                                  std::to_string(i) + ")");
  }
  weights_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = points_[i + 1] - points_[i];
    weights_[i] += 0.5 * h;
    weights_[i + 1] += 0.5 * h;
  }
  weights_[0] += origin_ == OriginCell::Constant ? points_[0] : 0.5 * points_[0];
}

HalfLineGrid HalfLineGrid::uniform(double a, double b, std::size_t n, OriginCell origin) {
  if (!(a > 0.0) || !(b > a) || n < 2) throw std::invalid_argument("uniform grid needs 0 < a < b, n >= 2");
  std::vector<double> p(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) p[i] = a + h * static_cast<double>(i);
  p.back() = b;
  return HalfLineGrid(std::move(p), GridKind::Uniform, origin);
}

HalfLineGrid HalfLineGrid::logarithmic(double a, double b, std::size_t n, OriginCell origin) {
  if (!(a > 0.0) || !(b > a) || n < 2) throw std::invalid_argument("log grid needs 0 < a < b, n >= 2");
  std::vector<double> p(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i)
    p[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  p.front() = a;
  p.back() = b;
  return HalfLineGrid(std::move(p), GridKind::Logarithmic, origin);
}

HalfLineGrid HalfLineGrid::from_points(std::vector<double> points, OriginCell origin) {
  GridKind kind = GridKind::Uniform;
  if (points.size() >= 3) {
    const double h0 = points[1] - points[0];
    for (std::size_t i = 2; i < points.size(); ++i) {
      if (std::abs((points[i] - points[i - 1]) - h0) > 1e-12 * std::max(1.0, std::abs(points[i])) * 16) {
        kind = GridKind::Logarithmic;
        break;
      }
    }
  }
  return HalfLineGrid(std::move(points), kind, origin);
}

double HalfLineGrid::spacing() const {
  return (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
}

std::size_t HalfLineGrid::locate(double x) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), x);
  std::size_t i = it == points_.begin() ? 0 : static_cast<std::size_t>(it - points_.begin()) - 1;
  return std::min(i, points_.size() - 2);
}

SampledFunction1D::SampledFunction1D(HalfLineGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("SampledFunction1D: value count does not match grid");
  for (double x : values)
    if (!std::isfinite(x)) throw std::invalid_argument("SampledFunction1D: non-finite value");
}

SampledFunction1D SampledFunction1D::sample(const HalfLineGrid& g,
                                            const std::function<double(double)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
  return SampledFunction1D(g, std::move(v));
}

double SampledFunction1D::operator()(double x) const {
  const auto& p = grid.points();
  if (x <= 0.0) return 0.0;
  if (x < p.front())
    return grid.origin() == OriginCell::Constant ? values.front() : values.front() * x / p.front();
  if (x > p.back()) return 0.0;
  const std::size_t i = grid.locate(x);
  const double s = (x - p[i]) / (p[i + 1] - p[i]);
  return values[i] + s * (values[i + 1] - values[i]);
}

SampledFunction2D::SampledFunction2D(HalfLineGrid g1, HalfLineGrid g2, Eigen::MatrixXd v)
    : grid1(std::move(g1)), grid2(std::move(g2)), values(std::move(v)) {
  if (values.rows() != static_cast<Eigen::Index>(grid1.size()) ||
      values.cols() != static_cast<Eigen::Index>(grid2.size()))
    throw std::invalid_argument("SampledFunction2D: matrix shape does not match grids");
  if (!values.allFinite()) throw std::invalid_argument("SampledFunction2D: non-finite value");
}

SampledFunction2D SampledFunction2D::sample(const HalfLineGrid& g1, const HalfLineGrid& g2,
                                            const std::function<double(double, double)>& f) {
  Eigen::MatrixXd v(g1.size(), g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i)
    for (std::size_t j = 0; j < g2.size(); ++j) v(i, j) = f(g1[i], g2[j]);
  return SampledFunction2D(g1, g2, std::move(v));
}

double quadrature(const SampledFunction1D& f) {
  double s = 0.0;
  const auto& w = f.grid.weights();
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.values[i];
  return s;
}

namespace {
Eigen::Map<const Eigen::VectorXd> wvec(const HalfLineGrid& g) {
  return Eigen::Map<const Eigen::VectorXd>(g.weights().data(), static_cast<Eigen::Index>(g.size()));
}
}  // namespace

double quadrature(const SampledFunction2D& f) {
  return wvec(f.grid1).dot(f.values * wvec(f.grid2));
}

double lp_norm(const SampledFunction1D& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  double s = 0.0;
  const auto& w = f.grid.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = std::abs(f.values[i]);
    s += w[i] * (p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p));
  }
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double lp_norm(const Eigen::MatrixXd& v, const HalfLineGrid& g1, const HalfLineGrid& g2, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  Eigen::MatrixXd a;
  if (p == 1.0) a = v.cwiseAbs();
  else if (p == 2.0) a = v.cwiseAbs2();
  else a = v.cwiseAbs().array().pow(p).matrix();
  const double s = wvec(g1).dot(a * wvec(g2));
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double lp_norm(const SampledFunction2D& f, double p) { return lp_norm(f.values, f.grid1, f.grid2, p); }

namespace {

std::vector<double> mirror_axis(const HalfLineGrid& g) {
  const std::size_t n = g.size();
  std::vector<double> a(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    a[n - 1 - i] = -g[i];
    a[n + i] = g[i];
  }
  return a;
}

MirroredFunction1D extend(const SampledFunction1D& f, int parity) {
  MirroredFunction1D m;
  m.axis = mirror_axis(f.grid);
  m.half = f.grid;
  m.parity = parity;
  const std::size_t n = f.grid.size();
  m.values.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m.values[n + i] = f.values[i];
    m.values[n - 1 - i] = parity * f.values[i];
  }
  return m;
}

}  // namespace

double MirroredFunction1D::operator()(double x) const {
  const std::size_t n = half.size();
  SampledFunction1D h(half, std::vector<double>(values.begin() + static_cast<long>(n), values.end()));
  return x >= 0.0 ? h(x) : parity * h(-x);
}

SampledFunction1D MirroredFunction1D::restrict_positive() const {
  const std::size_t n = half.size();
  return SampledFunction1D(half, std::vector<double>(values.begin() + static_cast<long>(n), values.end()));
}

MirroredFunction1D odd_extension(const SampledFunction1D& f) { return extend(f, -1); }
MirroredFunction1D even_extension(const SampledFunction1D& f) { return extend(f, +1); }

MirroredFunction2D odd_extension(const SampledFunction2D& f) {
  MirroredFunction2D m;
  m.axis1 = mirror_axis(f.grid1);
  m.axis2 = mirror_axis(f.grid2);
  m.half1 = f.grid1;
  m.half2 = f.grid2;
  const Eigen::Index n1 = f.values.rows(), n2 = f.values.cols();
  m.values.resize(2 * n1, 2 * n2);
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index j = 0; j < n2; ++j) {
      const double v = f.values(i, j);
      m.values(n1 + i, n2 + j) = v;
      m.values(n1 - 1 - i, n2 + j) = -v;
      m.values(n1 - 1 - i, n2 - 1 - j) = v;
      m.values(n1 + i, n2 - 1 - j) = -v;
    }
  return m;
}

double MirroredFunction2D::operator()(double x1, double x2) const {
  const Eigen::Index n1 = static_cast<Eigen::Index>(half1.size());
  const Eigen::Index n2 = static_cast<Eigen::Index>(half2.size());
  const double s = (x1 < 0.0 ? -1.0 : 1.0) * (x2 < 0.0 ? -1.0 : 1.0);
  const double a1 = std::abs(x1), a2 = std::abs(x2);
  // bilinear interpolation in the first quadrant copy
  auto interp_axis = [](const HalfLineGrid& g, double x, std::size_t& i, double& t, bool& inside) {
    inside = x > 0.0 && x <= g.max();
    if (!inside) return;
    if (x < g.min()) {
      i = 0;
      t = 0.0;
      return;
    }
    i = g.locate(x);
    t = (x - g[i]) / (g[i + 1] - g[i]);
  };
  std::size_t i = 0, j = 0;
  double t = 0, u = 0;
  bool in1 = false, in2 = false;
  interp_axis(half1, a1, i, t, in1);
  interp_axis(half2, a2, j, u, in2);
  if (!in1 || !in2) return 0.0;
  auto q = [&](std::size_t a, std::size_t b) { return values(n1 + static_cast<Eigen::Index>(a), n2 + static_cast<Eigen::Index>(b)); };
  const std::size_t i1 = std::min(i + 1, half1.size() - 1), j1 = std::min(j + 1, half2.size() - 1);
  double v = (1 - t) * (1 - u) * q(i, j) + t * (1 - u) * q(i1, j) + (1 - t) * u * q(i, j1) + t * u * q(i1, j1);
  // origin cells follow the grid convention
  if (a1 < half1.min() && half1.origin() == OriginCell::Linear) v *= a1 / half1.min();
  if (a2 < half2.min() && half2.origin() == OriginCell::Linear) v *= a2 / half2.min();
  return s * v;
}

SampledFunction2D MirroredFunction2D::restrict_first_quadrant() const {
  const Eigen::Index n1 = static_cast<Eigen::Index>(half1.size());
  const Eigen::Index n2 = static_cast<Eigen::Index>(half2.size());
  return SampledFunction2D(half1, half2, values.bottomRightCorner(n1, n2));
}

}  // namespace bh
