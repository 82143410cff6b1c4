#include "besselhardy/product_ops.hpp"

#include "besselhardy/quadrature.hpp"
#include "besselhardy/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bh {

namespace {

constexpr double kPi = std::numbers::pi;

enum Code { kSemigroup = 0, kTDerivative, kConjugate, kCone, kDy, kRiesz, kTely, kHilbert };

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Index windows {j : |g_j - g_i| < r} for every node i; both ends are
// nondecreasing in i.
struct Windows {
  std::vector<int> lo, hi;
};

Windows windows(const HalfLineGrid& g, double r) {
  const std::size_t n = g.size();
  Windows w;
  w.lo.resize(n);
  w.hi.resize(n);
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (g[i] - g[a] >= r) ++a;
    if (b < i) b = i;
    while (b + 1 < n && g[b + 1] - g[i] < r) ++b;
    w.lo[i] = static_cast<int>(a);
    w.hi[i] = static_cast<int>(b);
  }
  return w;
}

// out[i * so] = max_{lo_i <= j <= hi_i} in[j * si], monotone deque.
void sliding_max(const double* in, std::ptrdiff_t si, double* out, std::ptrdiff_t so,
                 const Windows& w, std::vector<int>& dq) {
  const std::size_t n = w.lo.size();
  dq.resize(n);
  std::size_t head = 0, tail = 0;
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (next <= w.hi[i]) {
      const double v = in[next * si];
      while (tail > head && in[dq[tail - 1] * si] <= v) --tail;
      dq[tail++] = next++;
    }
    while (dq[head] < w.lo[i]) ++head;
    out[static_cast<std::ptrdiff_t>(i) * so] = in[dq[head] * si];
  }
}

// Separable product-window max of a nonnegative matrix.
Eigen::MatrixXd window_max(const Eigen::MatrixXd& m, const Windows& w1, const Windows& w2,
                           std::vector<int>& dq) {
  const Eigen::Index n1 = m.rows(), n2 = m.cols();
  Eigen::MatrixXd a(n1, n2), b(n1, n2);
  for (Eigen::Index j = 0; j < n2; ++j)
    sliding_max(m.data() + j * n1, 1, a.data() + j * n1, 1, w1, dq);
  for (Eigen::Index i = 0; i < n1; ++i) sliding_max(a.data() + i, n1, b.data() + i, n1, w2, dq);
  return b;
}

double l1(const Eigen::MatrixXd& v, const HalfLineGrid& g1, const HalfLineGrid& g2) {
  return lp_norm(v, g1, g2, 1.0);
}

}  // namespace

// ---- scale lattice ----

void ConeParams::validate() const {
  if (!(aperture > 0.0)) throw std::invalid_argument("aperture must be positive");
  if (!(t_min > 0.0) || !(t_max > t_min)) throw std::invalid_argument("need 0 < t_min < t_max");
  if (scales_per_octave < 1) throw std::invalid_argument("scales_per_octave must be >= 1");
}

namespace {
int scale_intervals(const ConeParams& c) {
  c.validate();
  return std::max(1, static_cast<int>(std::lround(c.scales_per_octave * std::log2(c.t_max / c.t_min))));
}
}  // namespace

double ConeParams::log_step() const { return std::log(t_max / t_min) / scale_intervals(*this); }

std::vector<double> ConeParams::scales() const {
  const int k = scale_intervals(*this);
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) t[static_cast<std::size_t>(i)] = t_min * std::exp(i * log_step());
  t.back() = t_max;
  return t;
}

std::vector<double> ConeParams::scale_weights() const {
  std::vector<double> w(scales().size(), log_step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

ConeParams ConeParams::widened(int octaves) const {
  ConeParams c = *this;
  c.t_min = t_min * std::ldexp(1.0, -octaves);
  c.t_max = t_max * std::ldexp(1.0, octaves);
  return c;
}

const char* to_string(HardyKind k) {
  switch (k) {
    case HardyKind::G: return "g";
    case HardyKind::S: return "S";
    case HardyKind::Su: return "Su";
    case HardyKind::Nh: return "Nh";
    case HardyKind::NP: return "NP";
    case HardyKind::Rh: return "Rh";
    case HardyKind::RP: return "RP";
    case HardyKind::Riesz: return "Riesz";
    case HardyKind::Tely: return "Tely";
    case HardyKind::Odd: return "Odd";
  }
  return "?";
}

HardyKind parse_hardy_kind(const std::string& s) {
  for (HardyKind k : kAllHardyKinds)
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown functional kind: " + s);
}

const char* to_string(MaximalKind k) {
  switch (k) {
    case MaximalKind::Nh: return "Nh";
    case MaximalKind::NP: return "NP";
    case MaximalKind::Rh: return "Rh";
    case MaximalKind::RP: return "RP";
  }
  return "?";
}

MaximalKind parse_maximal_kind(const std::string& s) {
  if (s == "Nh") return MaximalKind::Nh;
  if (s == "NP") return MaximalKind::NP;
  if (s == "Rh") return MaximalKind::Rh;
  if (s == "RP") return MaximalKind::RP;
  throw std::invalid_argument("unknown maximal function: " + s);
}

// ---- per-axis operators ----

Eigen::MatrixXd cone_average_matrix(const HalfLineGrid& g, double t, double aperture) {
  const auto n = ix(g.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = g[static_cast<std::size_t>(i)];
    for (const Piece& s : half_line_pieces(g, x - aperture * t, x + aperture * t)) {
      const double h = s.cb - s.ca;
      const double wa = ((s.cb - s.p) * (s.cb - s.p) - (s.cb - s.q) * (s.cb - s.q)) / (2 * h);
      const double wb = ((s.q - s.ca) * (s.q - s.ca) - (s.p - s.ca) * (s.p - s.ca)) / (2 * h);
      if (s.ia >= 0) m(i, s.ia) += s.sa * wa / t;
      if (s.ib >= 0) m(i, s.ib) += s.sb * wb / t;
    }
  }
  return m;
}

Eigen::MatrixXd derivative_matrix(const HalfLineGrid& g) {
  const auto n = ix(g.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  if (n < 3) {
    const double h = g[1] - g[0];
    d(0, 0) = d(1, 0) = -1.0 / h;
    d(0, 1) = d(1, 1) = 1.0 / h;
    return d;
  }
  // derivative at x of the parabola through (x_a, x_b, x_c)
  auto stencil = [&](Eigen::Index row, Eigen::Index a, double x) {
    const double xa = g[static_cast<std::size_t>(a)], xb = g[static_cast<std::size_t>(a + 1)],
                 xc = g[static_cast<std::size_t>(a + 2)];
    d(row, a) = ((x - xb) + (x - xc)) / ((xa - xb) * (xa - xc));
    d(row, a + 1) = ((x - xa) + (x - xc)) / ((xb - xa) * (xb - xc));
    d(row, a + 2) = ((x - xa) + (x - xb)) / ((xc - xa) * (xc - xb));
  };
  stencil(0, 0, g[0]);
  for (Eigen::Index i = 1; i + 1 < n; ++i) stencil(i, i - 1, g[static_cast<std::size_t>(i)]);
  stencil(n - 1, n - 3, g.max());
  return d;
}

AxisOperators::AxisOperators(const BesselParams& p, const HalfLineGrid& g, const KernelConfig& cfg)
    : p_(p), sc_(p, g, cfg) {}

const Eigen::MatrixXd& AxisOperators::semigroup(Semigroup kind, double t) {
  const auto key = std::make_tuple(int(kSemigroup), t, kind == Semigroup::Heat ? 1.0 : 0.0);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Eigen::MatrixXd m = kind == Semigroup::Heat
                          ? sc_.multiplier_matrix([t](double z) { return std::exp(-t * z * z); })
                          : sc_.multiplier_matrix([t](double z) { return std::exp(-t * z); });
  return cache_.emplace(key, std::move(m)).first->second;
}

const Eigen::MatrixXd& AxisOperators::t_derivative(Semigroup kind, double t, HeatScaling scaling) {
  const double tag = kind == Semigroup::Poisson ? 0.0 : scaling == HeatScaling::Literal ? 1.0 : 2.0;
  const auto key = std::make_tuple(int(kTDerivative), t, tag);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  SpectralCalculus::Multiplier F;
  if (kind == Semigroup::Poisson) {
    F = [t](double z) { return -t * z * std::exp(-t * z); };
  } else if (scaling == HeatScaling::Literal) {
    F = [t](double z) { return -t * z * z * std::exp(-t * z * z); };
  } else {
    F = [t](double z) {
      const double s = t * z;
      return -2.0 * s * s * std::exp(-s * s);
    };
  }
  return cache_.emplace(key, sc_.multiplier_matrix(F)).first->second;
}

const Eigen::MatrixXd& AxisOperators::conjugate(double t) {
  const auto key = std::make_tuple(int(kConjugate), t, 0.0);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_
      .emplace(key, sc_.multiplier_matrix([t](double z) { return std::exp(-t * z); }, 0, 1))
      .first->second;
}

const Eigen::MatrixXd& AxisOperators::cone_average(double t, double aperture) {
  const auto key = std::make_tuple(int(kCone), t, aperture);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(key, cone_average_matrix(grid(), t, aperture)).first->second;
}

const Eigen::MatrixXd& AxisOperators::y_derivative() {
  const auto key = std::make_tuple(int(kDy), 0.0, 0.0);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(key, derivative_matrix(grid())).first->second;
}

const Eigen::MatrixXd& AxisOperators::riesz() {
  const auto key = std::make_tuple(int(kRiesz), 0.0, 0.0);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(key, riesz_matrix(p_, grid(), RieszRoute::Kernel)).first->second;
}

const Eigen::MatrixXd& AxisOperators::telyakovskii() {
  const auto key = std::make_tuple(int(kTely), 0.0, 0.0);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(key, telyakovskii_matrix(grid())).first->second;
}

const Eigen::MatrixXd& AxisOperators::hilbert_odd() {
  const auto key = std::make_tuple(int(kHilbert), 0.0, 0.0);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(key, Eigen::MatrixXd(hilbert_odd_matrix(grid()) / kPi)).first->second;
}

ProductOperators::ProductOperators(const BesselParams& p, const HalfLineGrid& g1,
                                   const HalfLineGrid& g2, const KernelConfig& cfg)
    : p_(p), cfg_(cfg) {
  a1_ = std::make_shared<AxisOperators>(p, g1, cfg);
  a2_ = g1 == g2 ? a1_ : std::make_shared<AxisOperators>(p, g2, cfg);
}

namespace {
void check_grids(ProductOperators& ops, const SampledFunction2D& f) {
  if (!(ops.axis(1).grid() == f.grid1) || !(ops.axis(2).grid() == f.grid2))
    throw std::invalid_argument("function grid does not match the operator grids");
}
}  // namespace

// ---- tensor semigroup ----

SampledFunction2D tensor_semigroup(ProductOperators& ops, const SampledFunction2D& f,
                                   Semigroup kind, double t1, double t2) {
  check_grids(ops, f);
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("t1, t2 must be positive");
  const Eigen::MatrixXd a = ops.axis(1).semigroup(kind, t1) * f.values;
  return f.with_values(a * ops.axis(2).semigroup(kind, t2).transpose());
}

SampledFunction2D tensor_semigroup(const BesselParams& p, const SampledFunction2D& f,
                                   Semigroup kind, double t1, double t2, const KernelConfig& cfg) {
  ProductOperators ops(p, f.grid1, f.grid2, cfg);
  return tensor_semigroup(ops, f, kind, t1, t2);
}

// ---- frame pass ----

namespace {

struct FrameRequest {
  bool g = false, S = false, Su = false, NP = false, Nh = false;
};

FrameFunctions frame_pass(ProductOperators& ops, const SampledFunction2D& f,
                          const ConeParams& cone, const SquareFunctionOptions& opt,
                          const FrameRequest& req) {
  check_grids(ops, f);
  cone.validate();
  AxisOperators& A1 = ops.axis(1);
  AxisOperators& A2 = ops.axis(2);
  const std::vector<double> ts = cone.scales();
  const std::vector<double> om = cone.scale_weights();
  const std::size_t K = ts.size();
  const double eps = cone.log_step();
  const Eigen::Index n1 = f.values.rows(), n2 = f.values.cols();
  const Eigen::MatrixXd& F = f.values;

  FrameFunctions out;
  Eigen::MatrixXd g2 = Eigen::MatrixXd::Zero(n1, n2), S2 = g2, Su2 = g2;
  out.NP = out.Nh = out.RP = out.Rh = g2;

  // per-axis operator lists
  struct Axis {
    std::vector<const Eigen::MatrixXd*> theta, P, H, C;
    std::vector<Eigen::MatrixXd> At, Ay;
    std::vector<Windows> win;
  };
  auto build = [&](AxisOperators& A, const HalfLineGrid& g) {
    Axis ax;
    for (std::size_t k = 0; k < K; ++k) {
      const double t = ts[k];
      if (req.g || req.S) ax.theta.push_back(&A.t_derivative(opt.kind, t, opt.scaling));
      ax.P.push_back(&A.semigroup(Semigroup::Poisson, t));
      if (req.Nh) ax.H.push_back(&A.semigroup(Semigroup::Heat, t));
      if (req.S || req.Su) ax.C.push_back(&A.cone_average(t, cone.aperture));
      if (req.Su) {
        const double tm = t * std::exp(-eps), tp = t * std::exp(eps);
        ax.At.push_back((A.semigroup(Semigroup::Poisson, tp) - A.semigroup(Semigroup::Poisson, tm)) /
                        (2.0 * eps));
        ax.Ay.push_back(t * A.y_derivative() * A.semigroup(Semigroup::Poisson, t));
      }
      if (req.NP || req.Nh) ax.win.push_back(windows(g, cone.aperture * t));
    }
    return ax;
  };
  const Axis X1 = build(A1, f.grid1);
  const Axis X2 = &A1 == &A2 ? X1 : build(A2, f.grid2);

  std::vector<int> dq;
  Eigen::MatrixXd Y, Yp, Yh, Yt, Yy, frame, accS(n1, n2), accSu(n1, n2), sq(n1, n2);
  for (std::size_t k1 = 0; k1 < K; ++k1) {
    if (req.g || req.S) Y.noalias() = *X1.theta[k1] * F;
    Yp.noalias() = *X1.P[k1] * F;
    if (req.Nh) Yh.noalias() = *X1.H[k1] * F;
    if (req.Su) {
      Yt.noalias() = X1.At[k1] * F;
      Yy.noalias() = X1.Ay[k1] * F;
    }
    accS.setZero();
    accSu.setZero();
    for (std::size_t k2 = 0; k2 < K; ++k2) {
      const double w = om[k1] * om[k2];
      if (req.g || req.S) {
        frame.noalias() = Y * X2.theta[k2]->transpose();
        sq = frame.cwiseAbs2();
        if (req.g) g2 += w * sq;
        if (req.S) accS.noalias() += om[k2] * sq * X2.C[k2]->transpose();
      }
      frame.noalias() = Yp * X2.P[k2]->transpose();
      frame = frame.cwiseAbs();
      out.RP = out.RP.cwiseMax(frame);
      if (req.NP) out.NP = out.NP.cwiseMax(window_max(frame, X1.win[k1], X2.win[k2], dq));
      if (req.Nh) {
        frame.noalias() = Yh * X2.H[k2]->transpose();
        frame = frame.cwiseAbs();
        out.Rh = out.Rh.cwiseMax(frame);
        out.Nh = out.Nh.cwiseMax(window_max(frame, X1.win[k1], X2.win[k2], dq));
      }
      if (req.Su) {
        frame.noalias() = Yt * X2.At[k2].transpose();
        sq = frame.cwiseAbs2();
        frame.noalias() = Yt * X2.Ay[k2].transpose();
        sq += frame.cwiseAbs2();
        frame.noalias() = Yy * X2.At[k2].transpose();
        sq += frame.cwiseAbs2();
        frame.noalias() = Yy * X2.Ay[k2].transpose();
        sq += frame.cwiseAbs2();
        accSu.noalias() += om[k2] * sq * X2.C[k2]->transpose();
      }
    }
    if (req.S) S2.noalias() += om[k1] * *X1.C[k1] * accS;
    if (req.Su) Su2.noalias() += om[k1] * *X1.C[k1] * accSu;
  }
  // cancellation in the cone averages can leave tiny negatives
  out.g = g2.cwiseMax(0.0).cwiseSqrt();
  out.S = S2.cwiseMax(0.0).cwiseSqrt();
  out.Su = Su2.cwiseMax(0.0).cwiseSqrt();
  if (!req.NP) out.NP.resize(0, 0);
  if (!req.Nh) out.Nh.resize(0, 0), out.Rh.resize(0, 0);
  return out;
}

}  // namespace

FrameFunctions frame_functions(ProductOperators& ops, const SampledFunction2D& f,
                               const ConeParams& cone, const SquareFunctionOptions& opt) {
  return frame_pass(ops, f, cone, opt, {true, true, true, true, true});
}

SampledFunction2D g_function(ProductOperators& ops, const SampledFunction2D& f,
                             const ConeParams& cone, const SquareFunctionOptions& opt) {
  return f.with_values(frame_pass(ops, f, cone, opt, {true, false, false, false, false}).g);
}

SampledFunction2D area_function_S(ProductOperators& ops, const SampledFunction2D& f,
                                  const ConeParams& cone, const SquareFunctionOptions& opt) {
  return f.with_values(frame_pass(ops, f, cone, opt, {false, true, false, false, false}).S);
}

SampledFunction2D area_function_Su(ProductOperators& ops, const SampledFunction2D& f,
                                   const ConeParams& cone) {
  return f.with_values(frame_pass(ops, f, cone, {}, {false, false, true, false, false}).Su);
}

SampledFunction2D maximal(ProductOperators& ops, const SampledFunction2D& f, MaximalKind which,
                          const ConeParams& cone) {
  const bool heat = which == MaximalKind::Nh || which == MaximalKind::Rh;
  FrameRequest req;
  req.NP = which == MaximalKind::NP;
  req.Nh = heat;
  FrameFunctions r = frame_pass(ops, f, cone, {}, req);
  switch (which) {
    case MaximalKind::Nh: return f.with_values(r.Nh);
    case MaximalKind::NP: return f.with_values(r.NP);
    case MaximalKind::Rh: return f.with_values(r.Rh);
    case MaximalKind::RP: return f.with_values(r.RP);
  }
  return f;
}

SampledFunction2D g_function(const BesselParams& p, const SampledFunction2D& f,
                             const ConeParams& cone, const SquareFunctionOptions& opt,
                             const KernelConfig& cfg) {
  ProductOperators ops(p, f.grid1, f.grid2, cfg);
  return g_function(ops, f, cone, opt);
}

SampledFunction2D area_function_S(const BesselParams& p, const SampledFunction2D& f,
                                  const ConeParams& cone, const SquareFunctionOptions& opt,
                                  const KernelConfig& cfg) {
  ProductOperators ops(p, f.grid1, f.grid2, cfg);
  return area_function_S(ops, f, cone, opt);
}

SampledFunction2D area_function_Su(const BesselParams& p, const SampledFunction2D& f,
                                   const ConeParams& cone, const KernelConfig& cfg) {
  ProductOperators ops(p, f.grid1, f.grid2, cfg);
  return area_function_Su(ops, f, cone);
}

SampledFunction2D maximal(const BesselParams& p, const SampledFunction2D& f, MaximalKind which,
                          const ConeParams& cone, const KernelConfig& cfg) {
  ProductOperators ops(p, f.grid1, f.grid2, cfg);
  return maximal(ops, f, which, cone);
}

// ---- L^1 functionals ----

HardyValues hardy_functionals(ProductOperators& ops, const SampledFunction2D& f,
                              const ConeParams& cone, const SquareFunctionOptions& opt) {
  check_grids(ops, f);
  const HalfLineGrid &g1 = f.grid1, &g2 = f.grid2;
  HardyValues out;
  auto set = [&out](HardyKind k, double v) { out.value[static_cast<std::size_t>(k)] = v; };
  const FrameFunctions fr = frame_pass(ops, f, cone, opt, {true, true, true, true, true});
  set(HardyKind::G, l1(fr.g, g1, g2));
  set(HardyKind::S, l1(fr.S, g1, g2));
  set(HardyKind::Su, l1(fr.Su, g1, g2));
  set(HardyKind::Nh, l1(fr.Nh, g1, g2));
  set(HardyKind::NP, l1(fr.NP, g1, g2));
  set(HardyKind::Rh, l1(fr.Rh, g1, g2));
  set(HardyKind::RP, l1(fr.RP, g1, g2));

  const Eigen::MatrixXd& F = f.values;
  auto four = [&](const Eigen::MatrixXd& T1, const Eigen::MatrixXd& T2) {
    const Eigen::MatrixXd a = T1 * F;
    return l1(F, g1, g2) + l1(a, g1, g2) + l1(F * T2.transpose(), g1, g2) +
           l1(a * T2.transpose(), g1, g2);
  };
  set(HardyKind::Riesz, four(ops.axis(1).riesz(), ops.axis(2).riesz()));
  set(HardyKind::Tely, four(ops.axis(1).telyakovskii(), ops.axis(2).telyakovskii()));
  // |H1 f_o| etc. are symmetric under the reflections, so the full-plane
  // norms are four times the quadrant ones
  set(HardyKind::Odd, 4.0 * four(ops.axis(1).hilbert_odd(), ops.axis(2).hilbert_odd()));

  // The windows (x/2, 3x/2) reach past the grid only where f lives on the
  // outer half of an axis.
  const double scale = F.cwiseAbs().maxCoeff();
  if (scale > 0.0) {
    const double floor = 1e-8 * scale;
    for (Eigen::Index i = 0; i < F.rows(); ++i)
      for (Eigen::Index j = 0; j < F.cols(); ++j)
        if (std::abs(F(i, j)) > floor &&
            (g1[static_cast<std::size_t>(i)] > 0.5 * g1.max() ||
             g2[static_cast<std::size_t>(j)] > 0.5 * g2.max()))
          out.clipped = true;
  }
  return out;
}

double hardy_functional(const BesselParams& p, const SampledFunction2D& f, HardyKind kind,
                        const ConeParams& cone, const KernelConfig& cfg) {
  ProductOperators ops(p, f.grid1, f.grid2, cfg);
  const HalfLineGrid &g1 = f.grid1, &g2 = f.grid2;
  const Eigen::MatrixXd& F = f.values;
  auto four = [&](const Eigen::MatrixXd& T1, const Eigen::MatrixXd& T2) {
    const Eigen::MatrixXd a = T1 * F;
    return l1(F, g1, g2) + l1(a, g1, g2) + l1(F * T2.transpose(), g1, g2) +
           l1(a * T2.transpose(), g1, g2);
  };
  switch (kind) {
    case HardyKind::G: return l1(g_function(ops, f, cone).values, g1, g2);
    case HardyKind::S: return l1(area_function_S(ops, f, cone).values, g1, g2);
    case HardyKind::Su: return l1(area_function_Su(ops, f, cone).values, g1, g2);
    case HardyKind::Nh: return l1(maximal(ops, f, MaximalKind::Nh, cone).values, g1, g2);
    case HardyKind::NP: return l1(maximal(ops, f, MaximalKind::NP, cone).values, g1, g2);
    case HardyKind::Rh: return l1(maximal(ops, f, MaximalKind::Rh, cone).values, g1, g2);
    case HardyKind::RP: return l1(maximal(ops, f, MaximalKind::RP, cone).values, g1, g2);
    case HardyKind::Riesz: return four(ops.axis(1).riesz(), ops.axis(2).riesz());
    case HardyKind::Tely: return four(ops.axis(1).telyakovskii(), ops.axis(2).telyakovskii());
    case HardyKind::Odd: return 4.0 * four(ops.axis(1).hilbert_odd(), ops.axis(2).hilbert_odd());
  }
  return 0.0;
}

// ---- conjugate quadruple ----

std::vector<double> uniform_lattice(double start, double step, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = start + step * static_cast<double>(i);
  return v;
}

ConjugateQuadruple conjugate_quadruple(ProductOperators& ops, const SampledFunction2D& f,
                                       const std::vector<double>& t1, const std::vector<double>& t2,
                                       const std::vector<double>& x1, const std::vector<double>& x2) {
  check_grids(ops, f);
  ConjugateQuadruple q;
  q.t1 = t1;
  q.t2 = t2;
  q.x1 = x1;
  q.x2 = x2;
  q.lambda = ops.params().lambda;
  auto mats = [](const SpectralCalculus& sc, const std::vector<double>& xs,
                 const std::vector<double>& ts, int order) {
    std::vector<Eigen::MatrixXd> m;
    for (double t : ts) {
      if (!(t > 0.0)) throw std::invalid_argument("conjugate_quadruple: t must be positive");
      m.push_back(sc.multiplier_matrix_at(xs, [t](double z) { return std::exp(-t * z); }, 0, order));
    }
    return m;
  };
  const auto P1 = mats(ops.axis(1).spectral(), x1, t1, 0), Q1 = mats(ops.axis(1).spectral(), x1, t1, 1);
  const auto P2 = mats(ops.axis(2).spectral(), x2, t2, 0), Q2 = mats(ops.axis(2).spectral(), x2, t2, 1);
  const std::size_t n = t1.size() * t2.size();
  q.u.resize(n);
  q.v.resize(n);
  q.w.resize(n);
  q.z.resize(n);
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const Eigen::MatrixXd a = P1[i] * f.values, b = Q1[i] * f.values;
    for (std::size_t j = 0; j < t2.size(); ++j) {
      const std::size_t k = q.index(i, j);
      q.u[k] = a * P2[j].transpose();
      q.v[k] = b * P2[j].transpose();
      q.w[k] = a * Q2[j].transpose();
      q.z[k] = b * Q2[j].transpose();
    }
  }
  return q;
}

ConjugateQuadruple conjugate_quadruple(const BesselParams& p, const SampledFunction2D& f,
                                       const std::vector<double>& t1, const std::vector<double>& t2,
                                       const std::vector<double>& x1, const std::vector<double>& x2,
                                       const KernelConfig& cfg) {
  ProductOperators ops(p, f.grid1, f.grid2, cfg);
  return conjugate_quadruple(ops, f, t1, t2, x1, x2);
}

namespace {

// Accessor for one component as a 4D array (i1, i2, a, b) <-> (t1, t2, x1, x2).
struct Field {
  const ConjugateQuadruple* q;
  const std::vector<Eigen::MatrixXd>* m;
  double operator()(long i1, long i2, long a, long b) const {
    return (*m)[q->index(static_cast<std::size_t>(i1), static_cast<std::size_t>(i2))](a, b);
  }
};

double step_of(const std::vector<double>& v) {
  if (v.size() < 3) throw std::invalid_argument("lattice needs at least 3 points per direction");
  const double h = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i)
    if (std::abs(v[i] - v[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("lattice must be uniform");
  return h;
}

}  // namespace

double cr_residual(const ConjugateQuadruple& q) {
  const double dt1 = step_of(q.t1), dt2 = step_of(q.t2), dx1 = step_of(q.x1), dx2 = step_of(q.x2);
  const long N1 = static_cast<long>(q.t1.size()), N2 = static_cast<long>(q.t2.size());
  const long M1 = static_cast<long>(q.x1.size()), M2 = static_cast<long>(q.x2.size());
  const double lam = q.lambda;
  const Field U{&q, &q.u}, V{&q, &q.v}, W{&q, &q.w}, Z{&q, &q.z};
  double worst = 0.0;
  // axis 1: pairs (u, v) and (w, z)
  for (long i1 = 1; i1 + 1 < N1; ++i1)
    for (long i2 = 0; i2 < N2; ++i2)
      for (long a = 1; a + 1 < M1; ++a)
        for (long b = 0; b < M2; ++b) {
          const double x = q.x1[static_cast<std::size_t>(a)];
          for (auto [P, C] : {std::pair{U, V}, std::pair{W, Z}}) {
            const double px = (P(i1, i2, a + 1, b) - P(i1, i2, a - 1, b)) / (2 * dx1);
            const double pt = (P(i1 + 1, i2, a, b) - P(i1 - 1, i2, a, b)) / (2 * dt1);
            const double cx = (C(i1, i2, a + 1, b) - C(i1, i2, a - 1, b)) / (2 * dx1);
            const double ct = (C(i1 + 1, i2, a, b) - C(i1 - 1, i2, a, b)) / (2 * dt1);
            worst = std::max(worst, std::abs(px - ct - lam / x * P(i1, i2, a, b)));
            worst = std::max(worst, std::abs(pt + cx + lam / x * C(i1, i2, a, b)));
          }
        }
  // axis 2: pairs (u, w) and (v, z)
  for (long i1 = 0; i1 < N1; ++i1)
    for (long i2 = 1; i2 + 1 < N2; ++i2)
      for (long a = 0; a < M1; ++a)
        for (long b = 1; b + 1 < M2; ++b) {
          const double x = q.x2[static_cast<std::size_t>(b)];
          for (auto [P, C] : {std::pair{U, W}, std::pair{V, Z}}) {
            const double px = (P(i1, i2, a, b + 1) - P(i1, i2, a, b - 1)) / (2 * dx2);
            const double pt = (P(i1, i2 + 1, a, b) - P(i1, i2 - 1, a, b)) / (2 * dt2);
            const double cx = (C(i1, i2, a, b + 1) - C(i1, i2, a, b - 1)) / (2 * dx2);
            const double ct = (C(i1, i2 + 1, a, b) - C(i1, i2 - 1, a, b)) / (2 * dt2);
            worst = std::max(worst, std::abs(px - ct - lam / x * P(i1, i2, a, b)));
            worst = std::max(worst, std::abs(pt + cx + lam / x * C(i1, i2, a, b)));
          }
        }
  return worst;
}

// ---- subharmonicity ----

namespace {

template <class Visit>
void laplacian_points(const ConjugateQuadruple& q, double p, double floor, Visit&& visit) {
  const double dt1 = step_of(q.t1), dt2 = step_of(q.t2), dx1 = step_of(q.x1), dx2 = step_of(q.x2);
  const long N1 = static_cast<long>(q.t1.size()), N2 = static_cast<long>(q.t2.size());
  const long M1 = static_cast<long>(q.x1.size()), M2 = static_cast<long>(q.x2.size());
  const Field U{&q, &q.u}, V{&q, &q.v}, W{&q, &q.w}, Z{&q, &q.z};
  auto mod = [](const Field& A, const Field& B, long i1, long i2, long a, long b) {
    return std::hypot(A(i1, i2, a, b), B(i1, i2, a, b));
  };
  // axis 1
  const std::pair<Field, Field> pairs1[] = {{U, V}, {W, Z}};
  for (int k = 0; k < 2; ++k) {
    const auto& [A, B] = pairs1[k];
    auto G = [&](long i1, long i2, long a, long b) { return std::pow(mod(A, B, i1, i2, a, b), p); };
    for (long i1 = 2; i1 + 2 < N1; ++i1)
      for (long i2 = 0; i2 < N2; ++i2)
        for (long a = 2; a + 2 < M1; ++a)
          for (long b = 0; b < M2; ++b) {
            if (mod(A, B, i1, i2, a, b) < floor) continue;
            const double g0 = G(i1, i2, a, b);
            const double l1 = (G(i1 + 1, i2, a, b) - 2 * g0 + G(i1 - 1, i2, a, b)) / (dt1 * dt1) +
                              (G(i1, i2, a + 1, b) - 2 * g0 + G(i1, i2, a - 1, b)) / (dx1 * dx1);
            const double l2 =
                (G(i1 + 2, i2, a, b) - 2 * g0 + G(i1 - 2, i2, a, b)) / (4 * dt1 * dt1) +
                (G(i1, i2, a + 2, b) - 2 * g0 + G(i1, i2, a - 2, b)) / (4 * dx1 * dx1);
            visit(k == 0 ? "uv" : "wz", l1, l2);
          }
  }
  // axis 2
  const std::pair<Field, Field> pairs2[] = {{U, W}, {V, Z}};
  for (int k = 0; k < 2; ++k) {
    const auto& [A, B] = pairs2[k];
    auto G = [&](long i1, long i2, long a, long b) { return std::pow(mod(A, B, i1, i2, a, b), p); };
    for (long i1 = 0; i1 < N1; ++i1)
      for (long i2 = 2; i2 + 2 < N2; ++i2)
        for (long a = 0; a < M1; ++a)
          for (long b = 2; b + 2 < M2; ++b) {
            if (mod(A, B, i1, i2, a, b) < floor) continue;
            const double g0 = G(i1, i2, a, b);
            const double l1 = (G(i1, i2 + 1, a, b) - 2 * g0 + G(i1, i2 - 1, a, b)) / (dt2 * dt2) +
                              (G(i1, i2, a, b + 1) - 2 * g0 + G(i1, i2, a, b - 1)) / (dx2 * dx2);
            const double l2 =
                (G(i1, i2 + 2, a, b) - 2 * g0 + G(i1, i2 - 2, a, b)) / (4 * dt2 * dt2) +
                (G(i1, i2, a, b + 2) - 2 * g0 + G(i1, i2, a, b - 2)) / (4 * dx2 * dx2);
            visit(k == 0 ? "uw" : "vz", l1, l2);
          }
  }
}

}  // namespace

SubharmonicityStats subharmonicity_stats(const ConjugateQuadruple& q, double exponent,
                                         double floor) {
  if (!(exponent > 0.0)) throw std::invalid_argument("exponent must be positive");
  SubharmonicityStats s;
  bool first = true;
  laplacian_points(q, exponent, floor, [&](const char*, double l1, double l2) {
    const double tol = 10.0 * std::abs(l1 - l2) / 3.0;
    const double margin = l1 + tol;
    if (first) {
      s.min_laplacian = l1;
      s.worst_margin = margin;
      first = false;
    }
    s.min_laplacian = std::min(s.min_laplacian, l1);
    s.worst_margin = std::min(s.worst_margin, margin);
    ++s.points;
    if (margin < 0.0) ++s.violations;
  });
  return s;
}

VerificationReport subharmonicity_check(const ConjugateQuadruple& q, double exponent,
                                        double floor) {
  VerificationReport r;
  const std::string par = "lambda=" + std::to_string(q.lambda) + ";p=" + std::to_string(exponent);
  struct Acc {
    double min_l = 0, margin = 0;
    std::size_t n = 0, bad = 0;
  };
  std::map<std::string, Acc> acc;
  laplacian_points(q, exponent, floor, [&](const char* pair, double l1, double l2) {
    Acc& a = acc[pair];
    const double margin = l1 + 10.0 * std::abs(l1 - l2) / 3.0;
    if (a.n == 0) a.min_l = l1, a.margin = margin;
    a.min_l = std::min(a.min_l, l1);
    a.margin = std::min(a.margin, margin);
    ++a.n;
    if (margin < 0.0) ++a.bad;
  });
  for (const auto& [pair, a] : acc) {
    r.record("subharmonic_min_laplacian", par + ";pair=" + pair, a.min_l);
    r.add("subharmonic_violations", par + ";pair=" + pair, static_cast<double>(a.bad), 0.0,
          a.bad == 0);
  }
  return r;
}

// ---- Merryfield ----

namespace {

double bump_raw(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

double bump_norm() {
  static const double c = [] {
    const auto rule = quad::gauss_legendre(32);
    double s = 0.0;
    const int m = 64;
    for (int k = 0; k < m; ++k) {
      const double a = -1.0 + 2.0 * k / m, b = a + 2.0 / m;
      for (std::size_t i = 0; i < rule.x.size(); ++i)
        s += 0.5 * (b - a) * rule.w[i] * bump_raw(0.5 * (a + b) + 0.5 * (b - a) * rule.x[i]);
    }
    return 1.0 / s;
  }();
  return c;
}

}  // namespace

double merryfield_bump(double x) { return bump_norm() * bump_raw(x); }

double merryfield_bump_derivative(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double d = 1.0 - x * x;
  return merryfield_bump(x) * (-2.0 * x / (d * d));
}

BumpSmoothing merryfield_smoothing(const SampledFunction1D& g, double t, double x, bool odd_psi) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  BumpSmoothing r;
  auto acc = [&](double s, double gv, double w) {
    const double ph = merryfield_bump(s), dph = merryfield_bump_derivative(s);
    r.conv += w * ph * gv;
    r.t_dx += w * dph * gv;
    r.t_dt -= w * (ph + s * dph) * gv;
    r.psi += w * (odd_psi ? s * ph : ph) * gv;
  };
  const auto& pts = g.grid.points();
  double hmin = pts[0];
  for (std::size_t i = 1; i < pts.size(); ++i) hmin = std::min(hmin, pts[i] - pts[i - 1]);
  if (t < 16.0 * hmin) {
    // int_{-1}^{1} K(s) g(x - t s) ds on the interpolant, composite Gauss
    const auto rule = quad::gauss_legendre(8);
    const int m = std::max(2, static_cast<int>(std::ceil(4.0 * t / hmin)));
    for (int k = 0; k < m; ++k) {
      const double a = -1.0 + 2.0 * k / m, b = a + 2.0 / m;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double s = 0.5 * (a + b) + 0.5 * (b - a) * rule.x[i];
        acc(s, g(x - t * s), 0.5 * (b - a) * rule.w[i]);
      }
    }
  } else {
    // kernel resolved by the grid: trapezoid over the nodes of g
    const auto& w = g.grid.weights();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double s = (x - pts[j]) / t;
      if (std::abs(s) < 1.0) acc(s, g.values[j], w[j] / t);
    }
  }
  return r;
}

double merryfield_ratio(const BesselParams& p, const SampledFunction1D& f,
                        const SampledFunction1D& g, const MerryfieldOptions& opt,
                        const KernelConfig& cfg) {
  const HalfLineGrid& grid = f.grid;
  const SpectralCalculus sc(p, grid, cfg);
  const std::vector<double> ts = opt.scales.scales();
  const std::vector<double> om = opt.scales.scale_weights();
  const auto& w = grid.weights();
  const std::size_t n = grid.size();

  double rhs1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double gv = g(grid[i]);
    rhs1 += w[i] * f.values[i] * f.values[i] * gv * gv;
  }
  double lhs = 0.0, rhs2 = 0.0;
  const Eigen::VectorXd fv = f.vec();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    const Eigen::VectorXd u = sc.apply([t](double z) { return std::exp(-t * z); }, fv);
    const Eigen::VectorXd ut = sc.apply([t](double z) { return -z * std::exp(-t * z); }, fv);
    // d_x u = (lambda / x) u - H_{lambda+1}(z e^{-tz} H_lambda f)
    const Eigen::VectorXd a = sc.apply([t](double z) { return z * std::exp(-t * z); }, fv, 0, 1);
    double l = 0.0, r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Index e = ix(i);
      const double x = grid[i];
      const double ux = p.lambda / x * u[e] - a[e];
      const BumpSmoothing b = merryfield_smoothing(g, t, x, opt.odd_psi);
      l += w[i] * (ut[e] * ut[e] + ux * ux) * b.conv * b.conv;
      r += w[i] * u[e] * u[e] * (b.t_dt * b.t_dt + b.t_dx * b.t_dx + b.psi * b.psi);
    }
    // dt = t dln t
    lhs += om[k] * t * t * l;
    rhs2 += om[k] * (opt.dt_over_t ? 1.0 : t) * r;
  }
  const double rhs = rhs1 + rhs2;
  if (rhs == 0.0) return 0.0;
  return lhs / rhs;
}

}  // namespace bh
