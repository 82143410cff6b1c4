#include "besselhardy/singular.hpp"

#include "besselhardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bh {

namespace {

constexpr double kPi = std::numbers::pi;

void add(Eigen::VectorXd& w, int i, double v) {
  if (i >= 0) w[i] += v;
}

// cells of the half-line interpolant: origin cell then grid cells
template <class Fn>
void for_each_cell(const HalfLineGrid& g, Fn&& fn) {
  if (g.origin() == OriginCell::Constant) fn(0.0, g[0], 0, 0);
  else fn(0.0, g[0], -1, 0);
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    fn(g[i], g[i + 1], static_cast<int>(i), static_cast<int>(i + 1));
}

}  // namespace

void PVConfig::validate() const {
  if (!(exclusion_radius >= 0.5)) throw std::invalid_argument("exclusion_radius must be >= 0.5 cells");
}

std::vector<Piece> half_line_pieces(const HalfLineGrid& g, double a, double b) {
  std::vector<Piece> out;
  a = std::max(a, 0.0);
  b = std::min(b, g.max());
  if (!(b > a)) return out;
  for_each_cell(g, [&](double ca, double cb, int ia, int ib) {
    const double p = std::max(a, ca), q = std::min(b, cb);
    if (q > p) out.push_back({p, q, ca, cb, ia, ib, 1.0, 1.0});
  });
  return out;
}

std::vector<Piece> line_pieces(const HalfLineGrid& g, int parity, double a, double b) {
  std::vector<Piece> neg, pos;
  const double sgn = parity < 0 ? -1.0 : 1.0;
  for_each_cell(g, [&](double ca, double cb, int ia, int ib) {
    // mirror image: cell [-cb, -ca] with the node roles swapped
    {
      const double p = std::max(a, -cb), q = std::min(b, -ca);
      if (q > p) neg.push_back({p, q, -cb, -ca, ib, ia, sgn, sgn});
    }
    {
      const double p = std::max(a, ca), q = std::min(b, cb);
      if (q > p) pos.push_back({p, q, ca, cb, ia, ib, 1.0, 1.0});
    }
  });
  std::reverse(neg.begin(), neg.end());
  neg.insert(neg.end(), pos.begin(), pos.end());
  return neg;
}

Eigen::VectorXd interpolation_weights(const HalfLineGrid& g, double x) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  if (x <= 0.0 || x > g.max()) return w;
  if (x < g.min()) {
    w[0] = g.origin() == OriginCell::Constant ? 1.0 : x / g.min();
    return w;
  }
  const std::size_t i = g.locate(x);
  const double s = (x - g[i]) / (g[i + 1] - g[i]);
  w[static_cast<Eigen::Index>(i)] += 1.0 - s;
  w[static_cast<Eigen::Index>(i + 1)] += s;
  return w;
}

namespace {

Eigen::VectorXd pv_product(const HalfLineGrid& g, const std::vector<Piece>& pieces, double x) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  double P = std::numeric_limits<double>::infinity(), Q = -P;
  const Piece* near = nullptr;
  for (const Piece& s : pieces) {
    const double len = s.q - s.p, width = s.cb - s.ca;
    if (s.ca <= x && x <= s.cb) {
      // the log part of this piece is folded into f(x) ln|(x-P)/(x-Q)| below
      add(w, s.ia, s.sa * len / width);
      add(w, s.ib, -s.sb * len / width);
      P = std::min(P, s.p);
      Q = std::max(Q, s.q);
      near = &s;
      continue;
    }
    const double lg = std::log(std::abs(x - s.p) / std::abs(x - s.q));
    add(w, s.ia, s.sa * ((s.cb - x) * lg + len) / width);
    add(w, s.ib, s.sb * ((x - s.ca) * lg - len) / width);
  }
  if (near && x != P && x != Q) {
    const double lg = std::log(std::abs(x - P) / std::abs(x - Q));
    const double width = near->cb - near->ca;
    add(w, near->ia, near->sa * (near->cb - x) / width * lg);
    add(w, near->ib, near->sb * (x - near->ca) / width * lg);
  }
  return w;
}

Eigen::VectorXd pv_trapezoid(const HalfLineGrid& g, const std::vector<Piece>& pieces, double x,
                             const PVConfig& cfg) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  if (pieces.empty()) return w;
  // f(x) from the cell containing x, if any
  const Piece* near = nullptr;
  for (const Piece& s : pieces)
    if (s.ca <= x && x <= s.cb) near = &s;
  Eigen::VectorXd fx = Eigen::VectorXd::Zero(w.size());
  if (near) {
    const double width = near->cb - near->ca;
    add(fx, near->ia, near->sa * (near->cb - x) / width);
    add(fx, near->ib, near->sb * (x - near->ca) / width);
  }
  const double a = pieces.front().p, b = pieces.back().q;
  // Trapezoid nodes of (f(t) - f(x)) / (x - t). With subtraction this integrand is
  // smooth, so an excluded node takes the value interpolated linearly from the
  // nearest kept nodes on either side; without it excluded nodes are dropped.
  struct Node {
    double t, q;
    const Piece* s;
    bool kept;
  };
  std::vector<Node> nodes;
  for (const Piece& s : pieces)
    for (double t : {s.p, s.q})
      nodes.push_back({t, 0.5 * (s.q - s.p), &s, std::abs(t - x) >= cfg.exclusion_radius * (s.cb - s.ca)});
  auto add_integrand = [&](const Node& n, double m) {
    const Piece& s = *n.s;
    const double c = m / (x - n.t), width = s.cb - s.ca;
    add(w, s.ia, c * s.sa * (s.cb - n.t) / width);
    add(w, s.ib, c * s.sb * (n.t - s.ca) / width);
    if (cfg.subtraction) w -= c * fx;
  };
  const Node* last_left = nullptr;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.kept) {
      add_integrand(n, n.q);
      last_left = &n;
      continue;
    }
    if (!cfg.subtraction) continue;
    const Node* right = nullptr;
    for (std::size_t j = i + 1; j < nodes.size() && !right; ++j)
      if (nodes[j].kept) right = &nodes[j];
    if (last_left && right) {
      const double r = (n.t - last_left->t) / (right->t - last_left->t);
      add_integrand(*last_left, n.q * (1 - r));
      add_integrand(*right, n.q * r);
    } else if (last_left || right) {
      add_integrand(last_left ? *last_left : *right, n.q);
    }
  }
  if (cfg.subtraction && x != a && x != b) w += std::log(std::abs(x - a) / std::abs(x - b)) * fx;
  return w;
}

}  // namespace

Eigen::VectorXd pv_weights(const HalfLineGrid& g, const std::vector<Piece>& pieces, double x,
                           const PVConfig& cfg) {
  cfg.validate();
  if (cfg.method == PVMethod::ProductIntegration) return pv_product(g, pieces, x);
  return pv_trapezoid(g, pieces, x, cfg);
}

namespace {

template <class K>
void smooth_piece(Eigen::VectorXd& w, const Piece& s, const K& kern, double a, double b,
                  double focus, int depth) {
  const double d = focus <= a ? a - focus : focus >= b ? focus - b : 0.0;
  if (focus > a && focus < b) {
    smooth_piece(w, s, kern, a, focus, focus, depth + 1);
    smooth_piece(w, s, kern, focus, b, focus, depth + 1);
    return;
  }
  const double len = b - a;
  if (len > 0.75 * d && depth < 48) {
    const double m = 0.5 * (a + b);
    smooth_piece(w, s, kern, a, m, focus, depth + 1);
    smooth_piece(w, s, kern, m, b, focus, depth + 1);
    return;
  }
  const quad::Rule& r = quad::gauss_legendre(len < 0.1 * d ? 4 : 8);
  const double c = 0.5 * (a + b), h = 0.5 * len, width = s.cb - s.ca;
  double wa = 0.0, wb = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double t = c + h * r.x[i];
    const double k = r.w[i] * h * kern(t);
    wa += k * (s.cb - t);
    wb += k * (t - s.ca);
  }
  add(w, s.ia, s.sa * wa / width);
  add(w, s.ib, s.sb * wb / width);
}

template <class K>
Eigen::VectorXd smooth_weights_t(const HalfLineGrid& g, const std::vector<Piece>& pieces,
                                 const K& kern, double focus) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  for (const Piece& s : pieces) smooth_piece(w, s, kern, s.p, s.q, focus, 0);
  return w;
}

}  // namespace

Eigen::VectorXd smooth_weights(const HalfLineGrid& g, const std::vector<Piece>& pieces,
                               const std::function<double(double)>& K, double focus) {
  return smooth_weights_t(g, pieces, K, focus);
}

Eigen::VectorXd log_weights(const HalfLineGrid& g, const std::vector<Piece>& pieces, double x) {
  auto F0 = [](double u) { return u == 0.0 ? 0.0 : u * std::log(std::abs(u)) - u; };
  auto F1 = [](double u) {
    return u == 0.0 ? 0.0 : 0.5 * u * u * std::log(std::abs(u)) - 0.25 * u * u;
  };
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  for (const Piece& s : pieces) {
    const double up = s.p - x, uq = s.q - x, width = s.cb - s.ca;
    const double d0 = F0(uq) - F0(up), d1 = F1(uq) - F1(up);
    add(w, s.ia, s.sa * ((s.cb - x) * d0 - d1) / width);
    add(w, s.ib, s.sb * ((x - s.ca) * d0 + d1) / width);
  }
  return w;
}

double hilbert_transform(const MirroredFunction1D& f, double x, const PVConfig& cfg) {
  const HalfLineGrid& g = f.half;
  const auto pieces = line_pieces(g, f.parity, -g.max(), g.max());
  const Eigen::VectorXd w = pv_weights(g, pieces, x, cfg);
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::Map<const Eigen::VectorXd> v(f.values.data() + n, n);
  return w.dot(v);
}

Eigen::MatrixXd hilbert_odd_matrix(const HalfLineGrid& g, const PVConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto pieces = line_pieces(g, -1, -g.max(), g.max());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    m.row(i) = pv_weights(g, pieces, g[static_cast<std::size_t>(i)], cfg).transpose();
  return m;
}

TelyValue telyakovskii(const SampledFunction1D& f, double x, const PVConfig& cfg) {
  if (!(x > 0.0)) throw std::invalid_argument("telyakovskii requires x > 0");
  const HalfLineGrid& g = f.grid;
  TelyValue out;
  out.clipped = 0.5 * x < g.min() || 1.5 * x > g.max();
  const auto pieces = half_line_pieces(g, 0.5 * x, 1.5 * x);
  out.value = pv_weights(g, pieces, x, cfg).dot(f.vec());
  return out;
}

Eigen::MatrixXd telyakovskii_matrix(const HalfLineGrid& g, std::vector<bool>* clipped,
                                    const PVConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m(n, n);
  if (clipped) clipped->assign(g.size(), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = g[static_cast<std::size_t>(i)];
    m.row(i) = pv_weights(g, half_line_pieces(g, 0.5 * x, 1.5 * x), x, cfg).transpose();
    if (clipped) (*clipped)[static_cast<std::size_t>(i)] = 0.5 * x < g.min() || 1.5 * x > g.max();
  }
  return m;
}

Comparison parse_comparison(const std::string& s) {
  if (s == "I1") return Comparison::I1;
  if (s == "I2") return Comparison::I2;
  if (s == "I3") return Comparison::I3;
  if (s == "J1") return Comparison::J1;
  if (s == "J2") return Comparison::J2;
  if (s == "J3") return Comparison::J3;
  throw std::invalid_argument("unknown comparison operator '" + s + "' (expected I1|I2|I3|J1|J2|J3)");
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::I1: return "I1";
    case Comparison::I2: return "I2";
    case Comparison::I3: return "I3";
    case Comparison::J1: return "J1";
    case Comparison::J2: return "J2";
    case Comparison::J3: return "J3";
  }
  return "?";
}

namespace {
int comparison_index(Comparison c) {
  switch (c) {
    case Comparison::I1:
    case Comparison::J1: return 1;
    case Comparison::I2:
    case Comparison::J2: return 2;
    default: return 3;
  }
}
}  // namespace

double comparison_constant(Comparison which) {
  switch (comparison_index(which)) {
    case 1: return 0.5 * std::log(3.0);
    case 2: return 0.5 * std::log(5.0);
    default: return std::log(9.0 / 5.0);
  }
}

Eigen::VectorXd comparison_weights(const HalfLineGrid& g, Comparison which, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("comparison operators require x > 0");
  const double x2 = x * x;
  auto k12 = [x2](double t) { return t / (x2 - t * t); };
  switch (comparison_index(which)) {
    case 1: return smooth_weights_t(g, half_line_pieces(g, 0.0, 0.5 * x), k12, x);
    case 2: return smooth_weights_t(g, half_line_pieces(g, 1.5 * x, g.max()), k12, x);
    default:
      return smooth_weights_t(g, half_line_pieces(g, 0.5 * x, 1.5 * x),
                              [x](double t) { return 1.0 / (x + t); }, -x);
  }
}

double comparison_op(const SampledFunction1D& f, Comparison which, double x) {
  return comparison_weights(f.grid, which, x).dot(f.vec());
}

namespace {

// Rows: the operator sampled on a log grid over [1e-6, 1e5].
struct L1Sampler {
  HalfLineGrid out;
  Eigen::MatrixXd w;
};

L1Sampler l1_sampler(const HalfLineGrid& g, Comparison which) {
  L1Sampler s;
  s.out = HalfLineGrid::logarithmic(1e-6, 1e5, 11 * 150 + 1);
  s.w.resize(static_cast<Eigen::Index>(s.out.size()), static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < s.out.size(); ++i)
    s.w.row(static_cast<Eigen::Index>(i)) = comparison_weights(g, which, s.out[i]).transpose();
  return s;
}

// L1 norm of a column sampled on the log grid. The constant-origin weight
// covers (0, 1e-6]; beyond 1e5 the I1 output decays like x^{-2}.
double l1_on_log_grid(const HalfLineGrid& out, const Eigen::VectorXd& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) s += out.weights()[i] * std::abs(v[static_cast<Eigen::Index>(i)]);
  return s + out.max() * std::abs(v[v.size() - 1]);
}

}  // namespace

double comparison_l1_ratio(const SampledFunction1D& f, Comparison which) {
  const L1Sampler s = l1_sampler(f.grid, which);
  const double den = lp_norm(f, 1.0);
  if (den == 0.0) return 0.0;
  return l1_on_log_grid(s.out, s.w * f.vec()) / den;
}

double comparison_l1_ratio(const SampledFunction2D& f, Comparison which) {
  const bool axis1 = which == Comparison::I1 || which == Comparison::I2 || which == Comparison::I3;
  const HalfLineGrid& along = axis1 ? f.grid1 : f.grid2;
  const HalfLineGrid& across = axis1 ? f.grid2 : f.grid1;
  const Eigen::MatrixXd vals = axis1 ? f.values : Eigen::MatrixXd(f.values.transpose());
  const L1Sampler s = l1_sampler(along, which);
  const Eigen::MatrixXd outv = s.w * vals;  // one column per across-node
  double num = 0.0;
  for (Eigen::Index j = 0; j < outv.cols(); ++j)
    num += across.weights()[static_cast<std::size_t>(j)] * l1_on_log_grid(s.out, outv.col(j));
  const double den = lp_norm(f, 1.0);
  if (den == 0.0) return 0.0;
  return num / den;
}

RieszSplitWeights riesz_split_weights(const RieszKernel& K, const HalfLineGrid& g, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("riesz_split requires x > 0");
  RieszSplitWeights w;
  auto far = [&K, x](double t) { return K.rho(t / x) / x; };
  w.a1 = smooth_weights_t(g, half_line_pieces(g, 0.0, 0.5 * x), far, x);
  w.a3 = smooth_weights_t(g, half_line_pieces(g, 1.5 * x, g.max()), far, x);
  const auto win = half_line_pieces(g, 0.5 * x, 1.5 * x);
  const double lam = K.lambda();
  // R - (1/pi)/(x-y) = (1/x) [r(y/x) - (lambda/pi) ln|x-y| + (lambda/pi) ln x]
  w.a2 = smooth_weights_t(g, win, [&K, x](double t) { return K.remainder(t / x) / x; }, x);
  w.a2 += (lam * std::log(x) / (kPi * x)) *
          smooth_weights_t(g, win, [](double) { return 1.0; }, x);
  w.a2 -= (lam / (kPi * x)) * log_weights(g, win, x);
  w.a4 = pv_weights(g, win, x) / kPi;
  return w;
}

RieszSplit riesz_split(const BesselParams& p, const SampledFunction1D& f, double x) {
  const RieszSplitWeights w = riesz_split_weights(riesz_kernel(p), f.grid, x);
  const auto v = f.vec();
  return {w.a1.dot(v), w.a2.dot(v), w.a3.dot(v), w.a4.dot(v)};
}

Eigen::MatrixXd riesz_matrix(const BesselParams& p, const HalfLineGrid& g, RieszRoute route,
                             const KernelConfig& cfg) {
  if (route == RieszRoute::Hankel) {
    SpectralCalculus sc(p, g, cfg);
    return sc.multiplier_matrix([](double) { return 1.0; }, 0, 1);
  }
  const RieszKernel& K = riesz_kernel(p);
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const RieszSplitWeights w = riesz_split_weights(K, g, g[static_cast<std::size_t>(i)]);
    m.row(i) = (w.a1 + w.a2 + w.a3 + w.a4).transpose();
  }
  return m;
}

SampledFunction1D riesz_apply(const BesselParams& p, const SampledFunction1D& f,
                              RieszRoute route, const KernelConfig& cfg) {
  Eigen::VectorXd v;
  if (route == RieszRoute::Hankel) {
    SpectralCalculus sc(p, f.grid, cfg);
    v = sc.apply([](double) { return 1.0; }, f.vec(), 0, 1);
  } else {
    const RieszKernel& K = riesz_kernel(p);
    v.resize(f.vec().size());
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
      const RieszSplitWeights w = riesz_split_weights(K, f.grid, f.grid[i]);
      v[static_cast<Eigen::Index>(i)] = (w.a1 + w.a2 + w.a3 + w.a4).dot(f.vec());
    }
  }
  return SampledFunction1D(f.grid, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace bh
