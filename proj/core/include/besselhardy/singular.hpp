#ifndef BESSELHARDY_SINGULAR_HPP
#define BESSELHARDY_SINGULAR_HPP

#include "besselhardy/grids.hpp"
#include "besselhardy/kernels.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace bh {

enum class PVMethod {
  // exact integration of the piecewise-linear interpolant against 1/(x-t)
  ProductIntegration,
  // trapezoid on (f(t) - f(x))/(x - t) with nodes within exclusion_radius cells
  // of x dropped, plus the exact log term for f(x)
  TrapezoidExclusion,
};

struct PVConfig {
  double exclusion_radius = 1.0;  // in local cells; TrapezoidExclusion only
  bool subtraction = true;        // TrapezoidExclusion only; off drops the log term
  PVMethod method = PVMethod::ProductIntegration;
  void validate() const;
};

// One stretch [p, q] of a piecewise-linear function. On [p, q]
//   f(t) = sa f[ia] (cb - t)/(cb - ca) + sb f[ib] (t - ca)/(cb - ca),
// where [ca, cb] is the grid cell the stretch belongs to. Index -1 stands for
// an identically zero node (the linear origin cell). sa, sb carry the parity
// signs of mirrored cells.
struct Piece {
  double p, q, ca, cb;
  int ia, ib;
  double sa, sb;
};

// Pieces of the interpolant of a function on g restricted to [a, b] within (0, max].
std::vector<Piece> half_line_pieces(const HalfLineGrid& g, double a, double b);
// Pieces of the parity extension to the whole line, restricted to [a, b].
std::vector<Piece> line_pieces(const HalfLineGrid& g, int parity, double a, double b);

// Node weights of p.v. int_pieces f(t) / (x - t) dt.
Eigen::VectorXd pv_weights(const HalfLineGrid& g, const std::vector<Piece>& pieces, double x,
                           const PVConfig& cfg = {});
// Node weights of int_pieces K(t) f(t) dt for K smooth on each piece. Pieces are
// subdivided geometrically towards `focus` where the kernel varies fastest.
Eigen::VectorXd smooth_weights(const HalfLineGrid& g, const std::vector<Piece>& pieces,
                               const std::function<double(double)>& K, double focus);
// Node weights of int_pieces ln|t - x| f(t) dt (exact).
Eigen::VectorXd log_weights(const HalfLineGrid& g, const std::vector<Piece>& pieces, double x);
// Node weights of the interpolant at x.
Eigen::VectorXd interpolation_weights(const HalfLineGrid& g, double x);

// H f(x) = p.v. int_R f(t) / (x - t) dt, no 1/pi.
double hilbert_transform(const MirroredFunction1D& f, double x, const PVConfig& cfg = {});
// H applied to the odd extension and sampled on the positive grid.
Eigen::MatrixXd hilbert_odd_matrix(const HalfLineGrid& g, const PVConfig& cfg = {});

struct TelyValue {
  double value = 0.0;
  bool clipped = false;  // (x/2, 3x/2) not inside (grid min, grid max]
};
// T f(x) = p.v. int_{x/2}^{3x/2} f(t) / (x - t) dt
TelyValue telyakovskii(const SampledFunction1D& f, double x, const PVConfig& cfg = {});
Eigen::MatrixXd telyakovskii_matrix(const HalfLineGrid& g, std::vector<bool>* clipped = nullptr,
                                    const PVConfig& cfg = {});

enum class Comparison { I1, I2, I3, J1, J2, J3 };
Comparison parse_comparison(const std::string& s);
const char* to_string(Comparison c);

// I1 = int_0^{x/2} f(t) t/(x^2-t^2), I2 = int_{3x/2}^inf f(t) t/(x^2-t^2),
// I3 = int_{x/2}^{3x/2} f(t)/(x+t). In one dimension J_k = I_k.
double comparison_op(const SampledFunction1D& f, Comparison which, double x);
Eigen::VectorXd comparison_weights(const HalfLineGrid& g, Comparison which, double x);

// ||op f||_1 / ||f||_1 with op f sampled on a log grid over [1e-6, 1e5]
// (plus analytic tails), independent of the input grid.
double comparison_l1_ratio(const SampledFunction1D& f, Comparison which);
// Two-dimensional version: I_k act along axis 1, J_k along axis 2.
double comparison_l1_ratio(const SampledFunction2D& f, Comparison which);
// Exact values from Fubini: ln sqrt3, ln sqrt5, ln(9/5).
double comparison_constant(Comparison which);

struct RieszSplit {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double sum() const { return a1 + a2 + a3 + a4; }
};
// R f(x) = A1 + A2 + A3 + A4 over (0, x/2), the window (x/2, 3x/2) minus its
// leading term, (3x/2, inf), and (1/pi) T f(x).
RieszSplit riesz_split(const BesselParams& p, const SampledFunction1D& f, double x);

struct RieszSplitWeights {
  Eigen::VectorXd a1, a2, a3, a4;
};
RieszSplitWeights riesz_split_weights(const RieszKernel& K, const HalfLineGrid& g, double x);

}  // namespace bh

#endif
