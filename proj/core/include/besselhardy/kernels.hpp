#ifndef BESSELHARDY_KERNELS_HPP
#define BESSELHARDY_KERNELS_HPP

#include "besselhardy/grids.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace bh {

struct BesselParams {
  double lambda = 1.0;

  BesselParams() = default;
  explicit BesselParams(double lambda);
  // The main estimates are stated for lambda > 1; callers surface this to users.
  bool regime_warning() const { return lambda <= 1.0; }
  double nu() const { return lambda - 0.5; }
};

struct KernelConfig {
  int subordination_nodes = 256;
  double spectral_zmax = 0.0;  // 0: pi / (space grid spacing)
  int spectral_n = 0;          // 0: 2 (n - 1) frequency nodes, 4 (n - 1) unless nu is a half-integer
  double tol = 1e-8;           // absolute tolerance for pointwise quadrature

  void validate() const;
};

class QuadratureNonconvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// W_t(x, y), evaluated in the overflow-free factorized form.
double heat_kernel(const BesselParams& p, double t, double x, double y);

// sqrt(u) e^{-u} I_{lambda-1/2}(u)
double claim_c_value(const BesselParams& p, double u);

// P_t(x, y) as an average of heat kernels over s = e^w.
double poisson_kernel_subordination(const BesselParams& p, const KernelConfig& cfg, double t,
                                    double x, double y);

// int_0^zmax sqrt(xz) J_a(xz) sqrt(yz) J_b(yz) m(z) dz with Gauss-Kronrod panels.
// Throws QuadratureNonconvergence when the panel error estimates exceed 10 tol.
double hankel_pair_integral(double nu_x, double nu_y, double x, double y, double zmax,
                            const std::function<double(double)>& m, double tol = 1e-8);

// P_t(x, y) through its Hankel representation.
double poisson_kernel_spectral(const BesselParams& p, double t, double x, double y,
                               double tol = 1e-8);

// Conjugate Poisson kernel. Sign: Q_t = P^{[lambda+1]}_t R with R = H_{lambda+1} H_lambda,
// which is the orientation in which the Cauchy-Riemann system A u = d_t v holds.
double conj_poisson_kernel(const BesselParams& p, const KernelConfig& cfg, double t, double x,
                           double y);

// -t d/dt P_t(x, y)
double q_deriv_kernel(const BesselParams& p, double t, double x, double y, double tol = 1e-8);

// Discrete Hankel calculus on a spatial grid.
//
// K_m(k, j) = sqrt(z_k y_j) J_{lambda - 1/2 + m}(z_k y_j), m = 0, 1, on the frequency
// grid z_k = k dz, k = 1..nz. forward() is trapezoid quadrature in y, backward()
// in z. Kernel matrices are built on first use.
class SpectralCalculus {
 public:
  using Multiplier = std::function<double(double)>;

  SpectralCalculus(const BesselParams& p, HalfLineGrid space, const KernelConfig& cfg = {});

  const BesselParams& params() const { return p_; }
  const HalfLineGrid& space() const { return space_; }
  const HalfLineGrid& frequency() const { return freq_; }

  const Eigen::MatrixXd& kernel(int order) const;

  // H_{lambda+order} f sampled on the frequency grid.
  Eigen::VectorXd forward(const Eigen::VectorXd& f, int order = 0) const;
  // H_{lambda+order} g sampled back on the spatial grid.
  Eigen::VectorXd backward(const Eigen::VectorXd& g, int order = 0) const;

  // Matrix of f -> H_out(F(z) H_in f) on the spatial grid.
  Eigen::MatrixXd multiplier_matrix(const Multiplier& F, int in_order = 0,
                                    int out_order = 0) const;
  // Same operator evaluated at arbitrary output points.
  Eigen::MatrixXd multiplier_matrix_at(const std::vector<double>& xs, const Multiplier& F,
                                       int in_order = 0, int out_order = 0) const;

  Eigen::VectorXd apply(const Multiplier& F, const Eigen::VectorXd& f, int in_order = 0,
                        int out_order = 0) const;

 private:
  BesselParams p_;
  HalfLineGrid space_, freq_;
  mutable std::unique_ptr<Eigen::MatrixXd> k_[2];
};

// H_lambda f on the default frequency grid of f's grid.
SampledFunction1D hankel_transform(const BesselParams& p, const SampledFunction1D& f,
                                   const KernelConfig& cfg = {});
// H_lambda f evaluated on an explicit output grid (direct sum, no matrix kept).
SampledFunction1D hankel_transform(const BesselParams& p, const SampledFunction1D& f,
                                   const HalfLineGrid& out);

// F(sqrt(S_lambda)) f = H_lambda(F H_lambda f).
SampledFunction1D spectral_apply(const BesselParams& p, const SpectralCalculus::Multiplier& F,
                                 const SampledFunction1D& f, const KernelConfig& cfg = {});

// Tabulated Riesz kernel. The kernel is homogeneous of degree -1,
// R(x, y) = rho(y / x) / x, and rho(s) is computed from
//   R = (1/sqrt(pi)) int_0^inf tau^{-1/2} (-A_x) W_tau(x, y) dtau.
// Near s = 1 the table stores
//   r(s) = rho(s) - (1/pi)/(1 - s) + (lambda/pi) ln|1 - s|,
// which stays bounded, so the principal value part can be handled analytically.
class RieszKernel {
 public:
  explicit RieszKernel(const BesselParams& p);

  double lambda() const { return lambda_; }
  double rho(double s) const;
  double remainder(double s) const;  // r(s), valid on [1/2, 3/2]
  double operator()(double x, double y) const { return rho(y / x) / x; }

  // rho(s) by direct quadrature, no table.
  static double rho_direct(const BesselParams& p, double s);

  static constexpr double kNearLo = 0.5, kNearHi = 1.5;

 private:
  double lambda_;
  // near window: uniform in s, nodes offset so that s = 1 is never hit
  double near_s0_ = 0.0, near_ds_ = 0.0;
  std::vector<double> near_r_;
  // far field: uniform in ln s
  double far_l0_ = 0.0, far_dl_ = 0.0;
  std::vector<double> far_rho_;
  double s_min_ = 0.0, s_max_ = 0.0, rho_min_ = 0.0, rho_max_ = 0.0;
  double lo_b_ = 0.0, hi_b_ = 0.0;
};

// Shared per-lambda table.
const RieszKernel& riesz_kernel(const BesselParams& p);

enum class RieszRoute { Kernel, Hankel };

// Riesz transform with the same sign as RieszKernel (R = H_{lambda+1} H_lambda).
SampledFunction1D riesz_apply(const BesselParams& p, const SampledFunction1D& f,
                              RieszRoute route, const KernelConfig& cfg = {});
// The operator as a matrix on f's grid.
Eigen::MatrixXd riesz_matrix(const BesselParams& p, const HalfLineGrid& g, RieszRoute route,
                             const KernelConfig& cfg = {});

}  // namespace bh

#endif
