#ifndef BESSELHARDY_PRODUCT_OPS_HPP
#define BESSELHARDY_PRODUCT_OPS_HPP

#include "besselhardy/grids.hpp"
#include "besselhardy/kernels.hpp"
#include "besselhardy/report.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace bh {

// Product cone |x_i - y_i| < aperture t_i over the log-spaced scale lattice
// t_k = t_min 2^{k / scales_per_octave}, k = 0..K, with t_K = t_max.
struct ConeParams {
  double aperture = 1.0;
  double t_min = 1.0 / 64.0;
  double t_max = 8.0;
  int scales_per_octave = 8;

  void validate() const;
  std::vector<double> scales() const;
  // trapezoid weights in ln t
  std::vector<double> scale_weights() const;
  double log_step() const;
  ConeParams widened(int octaves = 1) const;
};

enum class Semigroup { Heat, Poisson };

// How t d/dt is applied to the heat semigroup in g and S: Literal is
// t d/dt e^{-tS} (multiplier -t z^2 e^{-t z^2}); Squared is the common
// t d/dt e^{-t^2 S} (multiplier -2 (tz)^2 e^{-(tz)^2}).
enum class HeatScaling { Literal, Squared };

enum class MaximalKind { Nh, NP, Rh, RP };

enum class HardyKind { G, S, Su, Nh, NP, Rh, RP, Riesz, Tely, Odd };
inline constexpr std::array<HardyKind, 10> kAllHardyKinds = {
    HardyKind::G,  HardyKind::S,  HardyKind::Su,    HardyKind::Nh,   HardyKind::NP,
    HardyKind::Rh, HardyKind::RP, HardyKind::Riesz, HardyKind::Tely, HardyKind::Odd};
const char* to_string(HardyKind k);
HardyKind parse_hardy_kind(const std::string& s);
const char* to_string(MaximalKind k);
MaximalKind parse_maximal_kind(const std::string& s);

// Operators along one axis, cached by scale. Not thread safe.
class AxisOperators {
 public:
  AxisOperators(const BesselParams& p, const HalfLineGrid& g, const KernelConfig& cfg = {});

  const HalfLineGrid& grid() const { return sc_.space(); }
  const SpectralCalculus& spectral() const { return sc_; }

  // e^{-t S} or e^{-t sqrt S}
  const Eigen::MatrixXd& semigroup(Semigroup kind, double t);
  // t d/dt of the semigroup, realized spectrally
  const Eigen::MatrixXd& t_derivative(Semigroup kind, double t,
                                      HeatScaling scaling = HeatScaling::Literal);
  // Q_t = P^{[lambda+1]}_t R
  const Eigen::MatrixXd& conjugate(double t);
  // h -> (1/t) int_{|y - x| < a t, y > 0} h(y) dy on the interpolant
  const Eigen::MatrixXd& cone_average(double t, double aperture);
  // second order finite differences in y
  const Eigen::MatrixXd& y_derivative();
  // Riesz transform (kernel route), Telyakovskii transform, and the Hilbert
  // transform of the odd extension scaled by 1/pi.
  const Eigen::MatrixXd& riesz();
  const Eigen::MatrixXd& telyakovskii();
  const Eigen::MatrixXd& hilbert_odd();

 private:
  BesselParams p_;
  SpectralCalculus sc_;
  std::map<std::tuple<int, double, double>, Eigen::MatrixXd> cache_;
};

// Cone-average matrix, exposed for tests.
Eigen::MatrixXd cone_average_matrix(const HalfLineGrid& g, double t, double aperture);
// Three-point derivative matrix on an arbitrary grid (one-sided at the ends).
Eigen::MatrixXd derivative_matrix(const HalfLineGrid& g);

// Both axes of a 2D grid; the second axis shares the first one's cache when
// the grids coincide.
class ProductOperators {
 public:
  ProductOperators(const BesselParams& p, const HalfLineGrid& g1, const HalfLineGrid& g2,
                   const KernelConfig& cfg = {});
  const BesselParams& params() const { return p_; }
  AxisOperators& axis(int i) { return i == 1 ? *a1_ : *a2_; }
  const KernelConfig& config() const { return cfg_; }

 private:
  BesselParams p_;
  KernelConfig cfg_;
  std::shared_ptr<AxisOperators> a1_, a2_;
};

SampledFunction2D tensor_semigroup(ProductOperators& ops, const SampledFunction2D& f,
                                   Semigroup kind, double t1, double t2);
SampledFunction2D tensor_semigroup(const BesselParams& p, const SampledFunction2D& f,
                                   Semigroup kind, double t1, double t2,
                                   const KernelConfig& cfg = {});

struct SquareFunctionOptions {
  Semigroup kind = Semigroup::Poisson;
  HeatScaling scaling = HeatScaling::Literal;
};

SampledFunction2D g_function(ProductOperators& ops, const SampledFunction2D& f,
                             const ConeParams& cone, const SquareFunctionOptions& opt = {});
SampledFunction2D area_function_S(ProductOperators& ops, const SampledFunction2D& f,
                                  const ConeParams& cone, const SquareFunctionOptions& opt = {});
SampledFunction2D area_function_Su(ProductOperators& ops, const SampledFunction2D& f,
                                   const ConeParams& cone);
SampledFunction2D maximal(ProductOperators& ops, const SampledFunction2D& f, MaximalKind which,
                          const ConeParams& cone);

// Convenience overloads that build the operators for f's grid.
SampledFunction2D g_function(const BesselParams& p, const SampledFunction2D& f,
                             const ConeParams& cone, const SquareFunctionOptions& opt = {},
                             const KernelConfig& cfg = {});
SampledFunction2D area_function_S(const BesselParams& p, const SampledFunction2D& f,
                                  const ConeParams& cone, const SquareFunctionOptions& opt = {},
                                  const KernelConfig& cfg = {});
SampledFunction2D area_function_Su(const BesselParams& p, const SampledFunction2D& f,
                                   const ConeParams& cone, const KernelConfig& cfg = {});
SampledFunction2D maximal(const BesselParams& p, const SampledFunction2D& f, MaximalKind which,
                          const ConeParams& cone, const KernelConfig& cfg = {});

// Everything the scale lattice produces, from one pass over the frames.
struct FrameFunctions {
  Eigen::MatrixXd g, S, Su, Nh, NP, Rh, RP;
};
FrameFunctions frame_functions(ProductOperators& ops, const SampledFunction2D& f,
                               const ConeParams& cone, const SquareFunctionOptions& opt = {});

struct HardyValues {
  std::array<double, 10> value{};
  bool clipped = false;  // some Telyakovskii windows left the grid
  double operator[](HardyKind k) const { return value[static_cast<std::size_t>(k)]; }
};
// All ten L^1 functionals on f's grid.
HardyValues hardy_functionals(ProductOperators& ops, const SampledFunction2D& f,
                              const ConeParams& cone, const SquareFunctionOptions& opt = {});
double hardy_functional(const BesselParams& p, const SampledFunction2D& f, HardyKind kind,
                        const ConeParams& cone = {}, const KernelConfig& cfg = {});

// The four boundary values of the double conjugate extension on a uniform
// (t, x) lattice per axis. Frames are stored row-major in (t1, t2).
struct ConjugateQuadruple {
  std::vector<double> t1, t2, x1, x2;
  std::vector<Eigen::MatrixXd> u, v, w, z;  // each (x1, x2)
  std::size_t index(std::size_t i1, std::size_t i2) const { return i1 * t2.size() + i2; }
  double lambda = 1.0;
};

// Uniform lattice start + k step, k = 0..count-1.
std::vector<double> uniform_lattice(double start, double step, std::size_t count);

ConjugateQuadruple conjugate_quadruple(ProductOperators& ops, const SampledFunction2D& f,
                                       const std::vector<double>& t1, const std::vector<double>& t2,
                                       const std::vector<double>& x1, const std::vector<double>& x2);
ConjugateQuadruple conjugate_quadruple(const BesselParams& p, const SampledFunction2D& f,
                                       const std::vector<double>& t1, const std::vector<double>& t2,
                                       const std::vector<double>& x1, const std::vector<double>& x2,
                                       const KernelConfig& cfg = {});

// Max over interior lattice points of the eight Cauchy-Riemann residuals,
// derivatives by central differences. The lattices must be uniform.
double cr_residual(const ConjugateQuadruple& q);

// Discrete Laplacian of |F_pair|^p for the four pairs (u,v), (w,z) in (t1,x1) and
// (u,w), (v,z) in (t2,x2). Points with |F| < floor or without 2-step
// neighbours are skipped. Pass iff L_h >= -10 |L_h - L_2h| / 3 at every point.
VerificationReport subharmonicity_check(const ConjugateQuadruple& q, double exponent,
                                        double floor = 1e-6);
struct SubharmonicityStats {
  double min_laplacian = 0.0;  // most negative L_h seen
  double worst_margin = 0.0;   // min of L_h + tol
  std::size_t points = 0, violations = 0;
};
SubharmonicityStats subharmonicity_stats(const ConjugateQuadruple& q, double exponent,
                                         double floor = 1e-6);

// phi(x) = c exp(-1/(1 - x^2)) on (-1, 1) with unit integral.
double merryfield_bump(double x);
double merryfield_bump_derivative(double x);

struct MerryfieldOptions {
  ConeParams scales{1.0, 1.0 / 64.0, 16.0, 8};  // t window and lattice for the t integral
  // The third slot of Q_t g is psi_t * g with psi_t(x) = t^{-1} phi(x / t) as
  // printed; odd_psi uses t^{-1} psi(x / t), psi(x) = x phi(x), instead.
  bool odd_psi = false;
  // Integrate the last term against dx dt / t instead of dx dt.
  bool dt_over_t = false;
};

// phi_t * g and the three slots of Q_t g at x, g extended by zero to x < 0.
struct BumpSmoothing {
  double conv = 0, t_dt = 0, t_dx = 0, psi = 0;
};
BumpSmoothing merryfield_smoothing(const SampledFunction1D& g, double t, double x,
                                   bool odd_psi = false);

// LHS / RHS of the one dimensional Merryfield inequality for u = P_t f,
//   int int |grad u|^2 |phi_t * g|^2 t dx dt
//     <= C [ int f^2 g^2 + int int |u|^2 |Q_t g|^2 dx dt ],
// Q_t g = (t d_t (phi_t * g), t d_x (phi_t * g), psi_t * g).
// Returns 0 when both sides vanish.
double merryfield_ratio(const BesselParams& p, const SampledFunction1D& f,
                        const SampledFunction1D& g, const MerryfieldOptions& opt = {},
                        const KernelConfig& cfg = {});

}  // namespace bh

#endif
