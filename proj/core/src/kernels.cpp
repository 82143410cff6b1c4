#include "besselhardy/kernels.hpp"

#include "besselhardy/quadrature.hpp"
#include "besselhardy/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace bh {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

BesselParams::BesselParams(double l) : lambda(l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("lambda must be positive");
}

void KernelConfig::validate() const {
  if (subordination_nodes < 64)
    throw std::invalid_argument("subordination_nodes must be at least 64");
  if (spectral_zmax < 0.0) throw std::invalid_argument("spectral_zmax must be positive");
  if (spectral_n < 0) throw std::invalid_argument("spectral_n must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

double heat_kernel(const BesselParams& p, double t, double x, double y) {
  require_positive(t, "t");
  require_positive(x, "x");
  require_positive(y, "y");
  const double u = x * y / (2.0 * t);
  const double d = x - y;
  return std::sqrt(u) * specfun::bessel_i_scaled(p.nu(), u) / std::sqrt(2.0 * t) *
         std::exp(-d * d / (4.0 * t));
}

double claim_c_value(const BesselParams& p, double u) {
  require_positive(u, "u");
  return std::sqrt(u) * specfun::bessel_i_scaled(p.nu(), u);
}

// With s = e^w the subordination integrand becomes
//   g(w) = (t sqrt 2)^{-1} s^{-1} sqrt(u) e^{-u} I(u) e^{-A/s},
//   u = xy / (2 t^2 s),  A = (1 + (x-y)^2/t^2) / 4,
// which dies doubly exponentially as w -> -inf and at least like e^{-w} as w -> inf.
double poisson_kernel_subordination(const BesselParams& p, const KernelConfig& cfg, double t,
                                    double x, double y) {
  cfg.validate();
  require_positive(t, "t");
  require_positive(x, "x");
  require_positive(y, "y");
  const double d = (x - y) / t;
  const double A = 0.25 * (1.0 + d * d);
  const double c = x * y / (t * t);
  const double wlo = std::log(A / 42.0);
  const double whi = std::log(std::max(A, c)) + 40.0;
  const double nu = p.nu();
  auto g = [&](double w) {
    const double s = std::exp(w);
    const double u = 0.5 * c / s;
    return std::sqrt(u) * specfun::bessel_i_scaled(nu, u) * std::exp(-A / s) / s;
  };
  // Trapezoid with n and 2n - 1 nodes; the rule converges geometrically so the
  // finer sum is returned and the gap serves as the refinement check.
  const int n = cfg.subordination_nodes;
  const double h = (whi - wlo) / (n - 1);
  double coarse = 0.0, mid = 0.0;
  for (int i = 0; i < n; ++i) coarse += (i == 0 || i == n - 1 ? 0.5 : 1.0) * g(wlo + i * h);
  for (int i = 0; i + 1 < n; ++i) mid += g(wlo + (i + 0.5) * h);
  const double pre = 1.0 / (2.0 * std::sqrt(kPi) * t * std::sqrt(2.0));
  const double tc = pre * h * coarse;
  const double tf = pre * 0.5 * h * (coarse + mid);
  if (std::abs(tf - tc) > 10.0 * cfg.tol * std::max(1.0, std::abs(tf)))
    throw QuadratureNonconvergence("poisson_kernel_subordination: refinements differ by " +
                                   std::to_string(std::abs(tf - tc)));
  return tf;
}

double hankel_pair_integral(double nu_x, double nu_y, double x, double y, double zmax,
                            const std::function<double(double)>& m, double tol) {
  require_positive(x, "x");
  require_positive(y, "y");
  require_positive(zmax, "zmax");
  auto f = [&](double z) {
    if (z <= 0.0) return 0.0;
    return std::sqrt(x * z) * specfun::bessel_j(nu_x, x * z) * std::sqrt(y * z) *
           specfun::bessel_j(nu_y, y * z) * m(z);
  };
  // half a period of the fastest oscillation per panel, and no more than
  // zmax / 40 so the damping factor is resolved
  const double width = std::min(kPi / (x + y), zmax / 40.0);
  const int panels = static_cast<int>(std::ceil(zmax / width));
  const double w = zmax / panels;
  double sum = 0.0, err = 0.0;
  for (int k = 0; k < panels; ++k) {
    double e = 0.0;
    sum += quad::gk15(f, k * w, (k + 1) * w, &e);
    err += e;
  }
  if (err > 10.0 * tol * std::max(1.0, std::abs(sum)))
    throw QuadratureNonconvergence("hankel_pair_integral: panel error estimate " +
                                   std::to_string(err));
  return sum;
}

double poisson_kernel_spectral(const BesselParams& p, double t, double x, double y, double tol) {
  require_positive(t, "t");
  return hankel_pair_integral(p.nu(), p.nu(), x, y, 40.0 / t,
                              [t](double z) { return std::exp(-t * z); }, tol);
}

double conj_poisson_kernel(const BesselParams& p, const KernelConfig& cfg, double t, double x,
                           double y) {
  cfg.validate();
  require_positive(t, "t");
  return hankel_pair_integral(p.nu() + 1.0, p.nu(), x, y, 40.0 / t,
                              [t](double z) { return std::exp(-t * z); }, cfg.tol);
}

double q_deriv_kernel(const BesselParams& p, double t, double x, double y, double tol) {
  require_positive(t, "t");
  return hankel_pair_integral(p.nu(), p.nu(), x, y, 45.0 / t,
                              [t](double z) { return t * z * std::exp(-t * z); }, tol);
}

// ---------------------------------------------------------------------------

namespace {

HalfLineGrid make_frequency_grid(const BesselParams& p, const HalfLineGrid& space,
                                 const KernelConfig& cfg) {
  cfg.validate();
  const double zmax = cfg.spectral_zmax > 0.0 ? cfg.spectral_zmax : kPi / space.spacing();
  std::size_t nz;
  if (cfg.spectral_n > 0) {
    nz = static_cast<std::size_t>(cfg.spectral_n);
  } else {
    // dz = pi / (2 ymax) keeps the aliased images of the output at distance >= 3 ymax.
    // That is enough when J_nu is trigonometric (half-integer nu); otherwise the
    // frequency trapezoid is only algebraically accurate and needs a finer step.
    const double frac = std::abs(p.nu() - std::floor(p.nu()) - 0.5);
    const double density = frac < 1e-12 ? 2.0 : 4.0;
    nz = static_cast<std::size_t>(std::ceil(density * space.max() * zmax / kPi));
  }
  nz = std::max<std::size_t>(nz, 2);
  const double dz = zmax / static_cast<double>(nz);
  return HalfLineGrid::uniform(dz, zmax, nz, OriginCell::Linear);
}

Eigen::Map<const Eigen::VectorXd> as_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

SpectralCalculus::SpectralCalculus(const BesselParams& p, HalfLineGrid space,
                                   const KernelConfig& cfg)
    : p_(p), space_(std::move(space)), freq_(make_frequency_grid(p, space_, cfg)) {}

const Eigen::MatrixXd& SpectralCalculus::kernel(int order) const {
  if (order != 0 && order != 1) throw std::invalid_argument("kernel order must be 0 or 1");
  auto& slot = k_[order];
  if (!slot) {
    const double nu = p_.nu() + order;
    const auto nz = static_cast<Eigen::Index>(freq_.size());
    const auto n = static_cast<Eigen::Index>(space_.size());
    auto m = std::make_unique<Eigen::MatrixXd>(nz, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double y = space_[static_cast<std::size_t>(j)];
      for (Eigen::Index k = 0; k < nz; ++k) {
        const double r = freq_[static_cast<std::size_t>(k)] * y;
        (*m)(k, j) = std::sqrt(r) * specfun::bessel_j(nu, r);
      }
    }
    slot = std::move(m);
  }
  return *slot;
}

Eigen::VectorXd SpectralCalculus::forward(const Eigen::VectorXd& f, int order) const {
  if (f.size() != static_cast<Eigen::Index>(space_.size()))
    throw std::invalid_argument("forward: length mismatch");
  return kernel(order) * f.cwiseProduct(as_vec(space_.weights()));
}

Eigen::VectorXd SpectralCalculus::backward(const Eigen::VectorXd& g, int order) const {
  if (g.size() != static_cast<Eigen::Index>(freq_.size()))
    throw std::invalid_argument("backward: length mismatch");
  return kernel(order).transpose() * g.cwiseProduct(as_vec(freq_.weights()));
}

Eigen::VectorXd SpectralCalculus::apply(const Multiplier& F, const Eigen::VectorXd& f,
                                        int in_order, int out_order) const {
  Eigen::VectorXd g = forward(f, in_order);
  for (Eigen::Index k = 0; k < g.size(); ++k) g[k] *= F(freq_[static_cast<std::size_t>(k)]);
  return backward(g, out_order);
}

Eigen::MatrixXd SpectralCalculus::multiplier_matrix(const Multiplier& F, int in_order,
                                                    int out_order) const {
  const auto nz = static_cast<Eigen::Index>(freq_.size());
  Eigen::VectorXd d(nz);
  for (Eigen::Index k = 0; k < nz; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    d[k] = freq_.weights()[ks] * F(freq_[ks]);
  }
  Eigen::MatrixXd right = kernel(in_order) * as_vec(space_.weights()).asDiagonal();
  return kernel(out_order).transpose() * (d.asDiagonal() * right);
}

Eigen::MatrixXd SpectralCalculus::multiplier_matrix_at(const std::vector<double>& xs,
                                                       const Multiplier& F, int in_order,
                                                       int out_order) const {
  const auto nz = static_cast<Eigen::Index>(freq_.size());
  const auto m = static_cast<Eigen::Index>(xs.size());
  const double nu = p_.nu() + out_order;
  Eigen::MatrixXd left(m, nz);
  for (Eigen::Index k = 0; k < nz; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const double z = freq_[ks], c = freq_.weights()[ks] * F(z);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double r = z * xs[static_cast<std::size_t>(i)];
      left(i, k) = c * std::sqrt(r) * specfun::bessel_j(nu, r);
    }
  }
  return left * (kernel(in_order) * as_vec(space_.weights()).asDiagonal());
}

SampledFunction1D hankel_transform(const BesselParams& p, const SampledFunction1D& f,
                                   const KernelConfig& cfg) {
  SpectralCalculus sc(p, f.grid, cfg);
  const Eigen::VectorXd g = sc.forward(f.vec());
  return SampledFunction1D(sc.frequency(), std::vector<double>(g.data(), g.data() + g.size()));
}

SampledFunction1D hankel_transform(const BesselParams& p, const SampledFunction1D& f,
                                   const HalfLineGrid& out) {
  const auto& y = f.grid.points();
  const auto& w = f.grid.weights();
  std::vector<double> v(out.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (f.values[j] == 0.0) continue;
      const double r = out[i] * y[j];
      s += w[j] * f.values[j] * std::sqrt(r) * specfun::bessel_j(p.nu(), r);
    }
    v[i] = s;
  }
  return SampledFunction1D(out, std::move(v));
}

SampledFunction1D spectral_apply(const BesselParams& p, const SpectralCalculus::Multiplier& F,
                                 const SampledFunction1D& f, const KernelConfig& cfg) {
  SpectralCalculus sc(p, f.grid, cfg);
  const Eigen::VectorXd g = sc.apply(F, f.vec());
  return SampledFunction1D(f.grid, std::vector<double>(g.data(), g.data() + g.size()));
}

// ---------------------------------------------------------------------------
// Riesz kernel

namespace {

// e^{-u}(I_nu(u) - I_{nu+1}(u)) without the cancellation of the plain
// difference at large u: the asymptotic series are subtracted term by term.
double i_scaled_step_down(double nu, double u) {
  if (u <= specfun::kICrossover)
    return specfun::bessel_i_scaled(nu, u) - specfun::bessel_i_scaled(nu + 1.0, u);
  const double ma = 4.0 * nu * nu, mb = 4.0 * (nu + 1.0) * (nu + 1.0);
  double ta = 1.0, tb = 1.0, sum = 0.0, prev = 1e300;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    ta *= -(ma - odd * odd) / (8.0 * k * u);
    tb *= -(mb - odd * odd) / (8.0 * k * u);
    const double d = ta - tb;
    if (std::abs(d) > prev) break;
    sum += d;
    prev = std::abs(d);
    if (prev < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * u);
}

double lagrange4(const double* v, double t) {
  // nodes at 0, 1, 2, 3; t measured from node 0
  const double a = t, b = t - 1.0, c = t - 2.0, d = t - 3.0;
  return -v[0] * b * c * d / 6.0 + v[1] * a * c * d / 2.0 - v[2] * a * b * d / 2.0 +
         v[3] * a * b * c / 6.0;
}

double table_lookup(const std::vector<double>& v, double t) {
  // t is a fractional node index; use the 4 nodes around it
  const auto n = static_cast<long>(v.size());
  long i = static_cast<long>(std::floor(t)) - 1;
  i = std::clamp(i, 0L, n - 4);
  return lagrange4(v.data() + i, t - static_cast<double>(i));
}

constexpr double kNearStep = 1e-3;
constexpr double kFarLo = 1e-4, kFarHi = 1e2;
constexpr int kFarPerDecade = 200;

}  // namespace

// R(1, s) = (sqrt(s) / (4 sqrt(pi))) int tau^{-3/2} e^{-(1-s)^2/(4 tau)}
//           [I~_nu(u) - s I~_{nu+1}(u)] dw,  tau = e^w, u = s / (2 tau),
// with I~ the exponentially scaled I.
double RieszKernel::rho_direct(const BesselParams& p, double s) {
  require_positive(s, "s");
  if (s == 1.0) throw std::domain_error("rho is singular at s = 1");
  const double nu = p.nu();
  const double d2 = (1.0 - s) * (1.0 - s);
  const double big = std::max(1.0, s);
  const double wlo = std::log(d2 / 168.0);
  const double whi = std::log(big * big) + 38.0 / (p.lambda + 1.0) + 2.0;
  const double h = 0.07;
  const int n = static_cast<int>(std::ceil((whi - wlo) / h)) + 1;
  const double step = (whi - wlo) / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tau = std::exp(wlo + i * step);
    const double u = 0.5 * s / tau;
    const double bracket =
        i_scaled_step_down(nu, u) + (1.0 - s) * specfun::bessel_i_scaled(nu + 1.0, u);
    const double g = std::exp(-d2 / (4.0 * tau)) * bracket / (tau * std::sqrt(tau));
    sum += (i == 0 || i == n - 1 ? 0.5 : 1.0) * g;
  }
  return std::sqrt(s) / (4.0 * std::sqrt(kPi)) * step * sum;
}

RieszKernel::RieszKernel(const BesselParams& p) : lambda_(p.lambda) {
  // near table: nodes offset by half a step so that s = 1 is never a node
  near_ds_ = kNearStep;
  near_s0_ = kNearLo - 2.5 * kNearStep;
  const int nn = static_cast<int>(std::ceil((kNearHi + 2.5 * kNearStep - near_s0_) / near_ds_)) + 1;
  near_r_.resize(static_cast<std::size_t>(nn));
  for (int k = 0; k < nn; ++k) {
    const double s = near_s0_ + k * near_ds_;
    const double rho = rho_direct(p, s);
    near_r_[static_cast<std::size_t>(k)] =
        rho - (1.0 / kPi) / (1.0 - s) + (lambda_ / kPi) * std::log(std::abs(1.0 - s));
  }
  // far table on a log grid; nodes inside (0.7, 1.4) are never used
  far_l0_ = std::log(kFarLo);
  far_dl_ = std::log(10.0) / kFarPerDecade;
  const int nf = static_cast<int>(std::round((std::log(kFarHi) - far_l0_) / far_dl_)) + 1;
  far_rho_.resize(static_cast<std::size_t>(nf));
  for (int k = 0; k < nf; ++k) {
    const double s = std::exp(far_l0_ + k * far_dl_);
    far_rho_[static_cast<std::size_t>(k)] = (s > 0.7 && s < 1.4) ? 0.0 : rho_direct(p, s);
  }
  // Beyond the table rho ~ a s^lambda (1 + b s^2) and a s^{-lambda-2} (1 + b / s^2);
  // b is fixed from the end node and the node one decade inside.
  const int dec = kFarPerDecade;
  s_min_ = kFarLo;
  s_max_ = std::exp(far_l0_ + (nf - 1) * far_dl_);
  rho_min_ = far_rho_.front();
  rho_max_ = far_rho_.back();
  {
    const double s1 = s_min_, s2 = 10.0 * s_min_;
    const double q = far_rho_[static_cast<std::size_t>(dec)] / rho_min_ * std::pow(s1 / s2, lambda_);
    lo_b_ = (q - 1.0) / (s2 * s2 - q * s1 * s1);
  }
  {
    const double s1 = s_max_, s2 = 0.1 * s_max_;
    const double q = far_rho_[static_cast<std::size_t>(nf - 1 - dec)] / rho_max_ *
                     std::pow(s2 / s1, lambda_ + 2.0);
    hi_b_ = (q - 1.0) / (1.0 / (s2 * s2) - q / (s1 * s1));
  }
}

double RieszKernel::remainder(double s) const {
  return table_lookup(near_r_, (s - near_s0_) / near_ds_);
}

double RieszKernel::rho(double s) const {
  if (s >= kNearLo && s <= kNearHi) {
    if (s == 1.0) return std::numeric_limits<double>::infinity();
    return remainder(s) + (1.0 / kPi) / (1.0 - s) - (lambda_ / kPi) * std::log(std::abs(1.0 - s));
  }
  if (s < s_min_)
    return rho_min_ * std::pow(s / s_min_, lambda_) * (1.0 + lo_b_ * s * s) /
           (1.0 + lo_b_ * s_min_ * s_min_);
  if (s > s_max_)
    return rho_max_ * std::pow(s / s_max_, -lambda_ - 2.0) * (1.0 + hi_b_ / (s * s)) /
           (1.0 + hi_b_ / (s_max_ * s_max_));
  return table_lookup(far_rho_, (std::log(s) - far_l0_) / far_dl_);
}

const RieszKernel& riesz_kernel(const BesselParams& p) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<RieszKernel>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[p.lambda];
  if (!slot) slot = std::make_unique<RieszKernel>(p);
  return *slot;
}

}  // namespace bh
