#ifndef BESSELHARDY_GRIDS_HPP
#define BESSELHARDY_GRIDS_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace bh {

enum class GridKind { Uniform, Logarithmic };

// How the cell (0, x_0] in front of the first node is treated. Spatial grids
// extend the first value as a constant so that quadrature realizes the integral
// over all of (0, inf); frequency grids tie the value linearly to zero at the
// origin, which is what Hankel transforms (~ z^lambda) look like there.
enum class OriginCell { Constant, Linear };

class HalfLineGrid {
 public:
  HalfLineGrid() = default;

  static HalfLineGrid uniform(double a, double b, std::size_t n,
                              OriginCell origin = OriginCell::Constant);
  static HalfLineGrid logarithmic(double a, double b, std::size_t n,
                                  OriginCell origin = OriginCell::Constant);
  // Arbitrary strictly increasing positive points; kind is detected.
  static HalfLineGrid from_points(std::vector<double> points,
                                  OriginCell origin = OriginCell::Constant);

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  GridKind kind() const { return kind_; }
  OriginCell origin() const { return origin_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double min() const { return points_.front(); }
  double max() const { return points_.back(); }
  // mean spacing (b - a) / (n - 1)
  double spacing() const;
  // index of the last node <= x, clamped to [0, n-2]
  std::size_t locate(double x) const;

  bool operator==(const HalfLineGrid& o) const {
    return points_ == o.points_ && origin_ == o.origin_;
  }

 private:
  HalfLineGrid(std::vector<double> pts, GridKind kind, OriginCell origin);
  std::vector<double> points_;
  std::vector<double> weights_;
  GridKind kind_ = GridKind::Uniform;
  OriginCell origin_ = OriginCell::Constant;
};

struct SampledFunction1D {
  HalfLineGrid grid;
  std::vector<double> values;

  SampledFunction1D() = default;
  SampledFunction1D(HalfLineGrid g, std::vector<double> v);
  static SampledFunction1D sample(const HalfLineGrid& g, const std::function<double(double)>& f);

  // Piecewise-linear interpolant; the origin cell follows the grid convention
  // and the function is zero beyond the last node.
  double operator()(double x) const;
  Eigen::Map<const Eigen::VectorXd> vec() const {
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  }
};

struct SampledFunction2D {
  HalfLineGrid grid1, grid2;
  Eigen::MatrixXd values;  // (i, j) <-> (grid1[i], grid2[j])

  SampledFunction2D() = default;
  SampledFunction2D(HalfLineGrid g1, HalfLineGrid g2, Eigen::MatrixXd v);
  static SampledFunction2D sample(const HalfLineGrid& g1, const HalfLineGrid& g2,
                                  const std::function<double(double, double)>& f);
  SampledFunction2D with_values(Eigen::MatrixXd v) const {
    return SampledFunction2D(grid1, grid2, std::move(v));
  }
};

double quadrature(const SampledFunction1D& f);
double quadrature(const SampledFunction2D& f);
double lp_norm(const SampledFunction1D& f, double p);
double lp_norm(const SampledFunction2D& f, double p);
// L^p norm of a raw matrix with the tensor weights of the two grids.
double lp_norm(const Eigen::MatrixXd& v, const HalfLineGrid& g1, const HalfLineGrid& g2, double p);

// Function on the whole line sampled on a node set symmetric about 0.
struct MirroredFunction1D {
  std::vector<double> axis;    // -x_{n-1} .. -x_0, x_0 .. x_{n-1}
  std::vector<double> values;
  HalfLineGrid half;           // the originating half-line grid
  int parity = 1;              // +1 even, -1 odd
  double operator()(double x) const;
  SampledFunction1D restrict_positive() const;
};

struct MirroredFunction2D {
  std::vector<double> axis1, axis2;
  Eigen::MatrixXd values;
  HalfLineGrid half1, half2;
  double operator()(double x1, double x2) const;
  SampledFunction2D restrict_first_quadrant() const;
};

MirroredFunction1D odd_extension(const SampledFunction1D& f);
MirroredFunction1D even_extension(const SampledFunction1D& f);
// Product odd extension: signs + (x1>0,x2>0), - (x1<0,x2>0), + (x1<0,x2<0), - (x1>0,x2<0).
MirroredFunction2D odd_extension(const SampledFunction2D& f);

}  // namespace bh

#endif
