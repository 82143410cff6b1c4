#include "besselhardy/dyadic.hpp"

#include "besselhardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace bh {

// ---- intervals and rectangles ----

double DyadicInterval::lo() const { return std::ldexp(static_cast<double>(k), -n); }
double DyadicInterval::hi() const { return std::ldexp(static_cast<double>(k + 1), -n); }
double DyadicInterval::length() const { return std::ldexp(1.0, -n); }

bool DyadicInterval::contains(const DyadicInterval& o) const {
  if (o.n < n) return false;
  return (o.k >> (o.n - n)) == k;
}

// ---- open sets ----

namespace {

// cell range [a0, a1) of interval I on a lattice of generation g
void cell_range(const DyadicInterval& I, int g, long& a0, long& a1) {
  if (I.n >= g) {
    a0 = static_cast<long>(I.k >> (I.n - g));
    a1 = a0 + 1;
  } else {
    a0 = static_cast<long>(I.k << (g - I.n));
    a1 = static_cast<long>((I.k + 1) << (g - I.n));
  }
}

}  // namespace

DyadicOpenSet::DyadicOpenSet(const std::vector<DyadicRectangle>& rects) {
  if (rects.empty()) return;
  g1_ = rects.front().I.n;
  g2_ = rects.front().J.n;
  for (const auto& r : rects) {
    if (r.I.k < 0 || r.J.k < 0) throw std::invalid_argument("dyadic intervals need k >= 0");
    g1_ = std::max(g1_, r.I.n);
    g2_ = std::max(g2_, r.J.n);
  }
  if (g1_ - std::min_element(rects.begin(), rects.end(), [](auto& a, auto& b) { return a.I.n < b.I.n; })->I.n > 24 ||
      g2_ - std::min_element(rects.begin(), rects.end(), [](auto& a, auto& b) { return a.J.n < b.J.n; })->J.n > 24)
    throw std::invalid_argument("dyadic open set spans too many generations");
  for (const auto& r : rects) {
    long a0, a1, b0, b1;
    cell_range(r.I, g1_, a0, a1);
    cell_range(r.J, g2_, b0, b1);
    n1_ = std::max(n1_, a1);
    n2_ = std::max(n2_, b1);
  }
  if (n1_ * n2_ > 64L * 1024 * 1024) throw std::invalid_argument("dyadic open set too fine");
  bits_.assign(static_cast<std::size_t>(n1_ * n2_), 0);
  for (const auto& r : rects) {
    long a0, a1, b0, b1;
    cell_range(r.I, g1_, a0, a1);
    cell_range(r.J, g2_, b0, b1);
    for (long a = a0; a < a1; ++a)
      for (long b = b0; b < b1; ++b) bits_[static_cast<std::size_t>(a * n2_ + b)] = 1;
  }
  prefix_.assign(static_cast<std::size_t>((n1_ + 1) * (n2_ + 1)), 0);
  for (long a = 0; a < n1_; ++a)
    for (long b = 0; b < n2_; ++b)
      prefix_[static_cast<std::size_t>((a + 1) * (n2_ + 1) + b + 1)] =
          bits_[static_cast<std::size_t>(a * n2_ + b)] +
          prefix_[static_cast<std::size_t>(a * (n2_ + 1) + b + 1)] +
          prefix_[static_cast<std::size_t>((a + 1) * (n2_ + 1) + b)] -
          prefix_[static_cast<std::size_t>(a * (n2_ + 1) + b)];
  count_ = prefix_.back();
  cover_ = maximal_subrectangles(*this, MaximalMode::All);
}

long DyadicOpenSet::box(long a0, long a1, long b0, long b1) const {
  auto P = [this](long a, long b) { return prefix_[static_cast<std::size_t>(a * (n2_ + 1) + b)]; };
  return P(a1, b1) - P(a0, b1) - P(a1, b0) + P(a0, b0);
}

double DyadicOpenSet::measure() const {
  return static_cast<double>(count_) * std::ldexp(1.0, -g1_ - g2_);
}

bool DyadicOpenSet::cell(long a, long b) const {
  if (a < 0 || b < 0 || a >= n1_ || b >= n2_) return false;
  return bits_[static_cast<std::size_t>(a * n2_ + b)] != 0;
}

bool DyadicOpenSet::contains(const DyadicRectangle& r) const {
  if (empty() || r.I.k < 0 || r.J.k < 0) return false;
  // generations far coarser than the bitmap cannot fit
  if (g1_ - r.I.n > 40 || g2_ - r.J.n > 40) return false;
  long a0, a1, b0, b1;
  cell_range(r.I, g1_, a0, a1);
  cell_range(r.J, g2_, b0, b1);
  if (a1 > n1_ || b1 > n2_) return false;
  return box(a0, a1, b0, b1) == (a1 - a0) * (b1 - b0);
}

bool DyadicOpenSet::contains_point(double x1, double x2) const {
  if (empty() || x1 <= 0.0 || x2 <= 0.0) return false;
  // cells are (a h, (a+1) h]
  const long a = static_cast<long>(std::ceil(std::ldexp(x1, g1_))) - 1;
  const long b = static_cast<long>(std::ceil(std::ldexp(x2, g2_))) - 1;
  return cell(a, b);
}

std::vector<DyadicRectangle> maximal_subrectangles(const DyadicOpenSet& omega, MaximalMode mode) {
  std::vector<DyadicRectangle> out;
  if (omega.empty()) return out;
  auto coarsest = [](long cells, int g) {
    // smallest n with 2^{-n} >= extent, so (0, 2^{-n}] is the only candidate
    return g - static_cast<int>(std::ceil(std::log2(static_cast<double>(cells))));
  };
  const int lo1 = coarsest(omega.cells1(), omega.gen1());
  const int lo2 = coarsest(omega.cells2(), omega.gen2());
  for (int n1 = lo1; n1 <= omega.gen1(); ++n1) {
    const std::int64_t K1 = (omega.cells1() + (1L << (omega.gen1() - n1)) - 1) >> (omega.gen1() - n1);
    for (int n2 = lo2; n2 <= omega.gen2(); ++n2) {
      const std::int64_t K2 =
          (omega.cells2() + (1L << (omega.gen2() - n2)) - 1) >> (omega.gen2() - n2);
      for (std::int64_t k1 = 0; k1 < K1; ++k1)
        for (std::int64_t k2 = 0; k2 < K2; ++k2) {
          const DyadicRectangle r{{n1, k1}, {n2, k2}};
          if (!omega.contains(r)) continue;
          const bool up1 = omega.contains({r.I.parent(), r.J});
          const bool up2 = omega.contains({r.I, r.J.parent()});
          const bool keep = mode == MaximalMode::All    ? !up1 && !up2
                            : mode == MaximalMode::Dir1 ? !up1
                                                        : !up2;
          if (keep) out.push_back(r);
        }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- cell sets and the enlargement {M_s chi > 1/2} ----

CellSet::CellSet(long n1, long n2, double h1, double h2)
    : n1_(n1), n2_(n2), h1_(h1), h2_(h2), bits_(static_cast<std::size_t>(n1 * n2), 0) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("CellSet needs a nonempty lattice");
}

CellSet CellSet::from(const DyadicOpenSet& o) {
  if (o.empty()) return CellSet(1, 1, 1.0, 1.0);
  CellSet c(o.cells1(), o.cells2(), std::ldexp(1.0, -o.gen1()), std::ldexp(1.0, -o.gen2()));
  for (long a = 0; a < o.cells1(); ++a)
    for (long b = 0; b < o.cells2(); ++b)
      if (o.cell(a, b)) c.set(a, b);
  return c;
}

long CellSet::count() const {
  return static_cast<long>(std::count(bits_.begin(), bits_.end(), 1));
}

void CellSet::build_prefix() const {
  prefix_.assign(static_cast<std::size_t>((n1_ + 1) * (n2_ + 1)), 0);
  for (long a = 0; a < n1_; ++a)
    for (long b = 0; b < n2_; ++b)
      prefix_[static_cast<std::size_t>((a + 1) * (n2_ + 1) + b + 1)] =
          (get(a, b) ? 1 : 0) + prefix_[static_cast<std::size_t>(a * (n2_ + 1) + b + 1)] +
          prefix_[static_cast<std::size_t>((a + 1) * (n2_ + 1) + b)] -
          prefix_[static_cast<std::size_t>(a * (n2_ + 1) + b)];
}

bool CellSet::covers(double x0, double x1, double y0, double y1) const {
  if (prefix_.empty()) build_prefix();
  const long a0 = static_cast<long>(std::floor(x0 / h1_ + 1e-9));
  const long a1 = static_cast<long>(std::ceil(x1 / h1_ - 1e-9));
  const long b0 = static_cast<long>(std::floor(y0 / h2_ + 1e-9));
  const long b1 = static_cast<long>(std::ceil(y1 / h2_ - 1e-9));
  if (a0 < 0 || b0 < 0 || a1 > n1_ || b1 > n2_ || a1 <= a0 || b1 <= b0) return false;
  auto P = [this](long a, long b) { return prefix_[static_cast<std::size_t>(a * (n2_ + 1) + b)]; };
  return P(a1, b1) - P(a0, b1) - P(a1, b0) + P(a0, b0) == (a1 - a0) * (b1 - b0);
}

// For every row range [a0, a1] the column profile s(b) is scanned for column
// ranges with mean > 1/2; with Q(c) = 2 P(c) - w c (P the prefix of s) the range
// [b0, c) qualifies iff Q(c) > Q(b0), and the furthest such c comes from a
// suffix maximum. Points of the set lie within twice its extent, hence the padding.
CellSet CellSet::enlarged() const {
  long amin = n1_, amax = -1, bmin = n2_, bmax = -1;
  for (long a = 0; a < n1_; ++a)
    for (long b = 0; b < n2_; ++b)
      if (get(a, b)) {
        amin = std::min(amin, a);
        amax = std::max(amax, a);
        bmin = std::min(bmin, b);
        bmax = std::max(bmax, b);
      }
  const long N1 = 2 * (amax + 1), N2 = 2 * (bmax + 1);
  if (amax < 0) return CellSet(n1_, n2_, h1_, h2_);
  CellSet out(N1, N2, h1_, h2_);
  // best[a0 * N2 + b] = largest a1 such that a range [a0, a1] x [.., b ..] qualifies
  std::vector<long> best(static_cast<std::size_t>(N1 * N2), -1);
  std::vector<long> s(static_cast<std::size_t>(N2)), Q(static_cast<std::size_t>(N2 + 1)),
      suf(static_cast<std::size_t>(N2 + 2)), diff(static_cast<std::size_t>(N2 + 1));
  auto cellv = [&](long a, long b) { return a < n1_ && b < n2_ && get(a, b) ? 1L : 0L; };
  for (long a0 = 0; a0 <= amax; ++a0) {
    std::fill(s.begin(), s.end(), 0);
    for (long a1 = a0; a1 < N1; ++a1) {
      for (long b = bmin; b <= bmax; ++b) s[static_cast<std::size_t>(b)] += cellv(a1, b);
      if (a1 < amin) continue;
      const long w = a1 - a0 + 1;
      Q[0] = 0;
      for (long c = 1; c <= N2; ++c)
        Q[static_cast<std::size_t>(c)] = Q[static_cast<std::size_t>(c - 1)] + 2 * s[static_cast<std::size_t>(c - 1)] - w;
      suf[static_cast<std::size_t>(N2 + 1)] = std::numeric_limits<long>::min();
      for (long c = N2; c >= 0; --c)
        suf[static_cast<std::size_t>(c)] = std::max(suf[static_cast<std::size_t>(c + 1)], Q[static_cast<std::size_t>(c)]);
      std::fill(diff.begin(), diff.end(), 0);
      bool any = false;
      for (long b0 = 0; b0 <= bmax; ++b0) {
        const long v = Q[static_cast<std::size_t>(b0)];
        if (suf[static_cast<std::size_t>(b0 + 1)] <= v) continue;
        // largest c > b0 with suf[c] > v
        long lo = b0 + 1, hi = N2;
        while (lo < hi) {
          const long mid = (lo + hi + 1) / 2;
          if (suf[static_cast<std::size_t>(mid)] > v) lo = mid;
          else hi = mid - 1;
        }
        ++diff[static_cast<std::size_t>(b0)];
        --diff[static_cast<std::size_t>(lo)];
        any = true;
      }
      if (!any) continue;
      long run = 0;
      for (long b = 0; b < N2; ++b) {
        run += diff[static_cast<std::size_t>(b)];
        if (run > 0) best[static_cast<std::size_t>(a0 * N2 + b)] = a1;
      }
    }
  }
  for (long b = 0; b < N2; ++b) {
    long reach = -1;
    for (long a = 0; a < N1; ++a) {
      reach = std::max(reach, best[static_cast<std::size_t>(a * N2 + b)]);
      if (reach >= a) out.set(a, b);
    }
  }
  return out;
}

// ---- Journe ----

double journe_gamma(const CellSet& tilde, const DyadicRectangle& r, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
  DyadicInterval l = axis == 1 ? r.I : r.J;
  const DyadicInterval& other = axis == 1 ? r.J : r.I;
  auto inside = [&](const DyadicInterval& x) {
    return axis == 1 ? tilde.covers(x.lo(), x.hi(), other.lo(), other.hi())
                     : tilde.covers(other.lo(), other.hi(), x.lo(), x.hi());
  };
  const double base = l.length();
  for (int guard = 0; guard < 64; ++guard) {
    const DyadicInterval up = l.parent();
    if (!inside(up)) break;
    l = up;
  }
  return l.length() / base;
}

double journe_gamma(const DyadicOpenSet& omega, const DyadicRectangle& r, int axis) {
  return journe_gamma(CellSet::from(omega).enlarged(), r, axis);
}

double journe_ratio(const DyadicOpenSet& omega, double delta, int axis) {
  if (omega.empty()) return 0.0;
  const CellSet tilde = CellSet::from(omega).enlarged();
  const auto rects = maximal_subrectangles(omega, axis == 1 ? MaximalMode::Dir2 : MaximalMode::Dir1);
  double s = 0.0;
  for (const auto& r : rects) s += r.area() * std::pow(journe_gamma(tilde, r, axis), -delta);
  return s / omega.measure();
}

// ---- random sets ----

std::uint64_t Lcg::next() {
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  return state_;
}

double Lcg::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Lcg::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Lcg::below(0)");
  return std::min<std::uint64_t>(static_cast<std::uint64_t>(uniform() * static_cast<double>(n)), n - 1);
}

DyadicOpenSet random_open_set(Lcg& rng, int depth, int max_rects) {
  if (depth < 0 || max_rects < 1) throw std::invalid_argument("random_open_set: bad parameters");
  const int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_rects)));
  std::vector<DyadicRectangle> rects;
  for (int i = 0; i < count; ++i) {
    const int n1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth + 1)));
    const int n2 = static_cast<int>(rng.below(static_cast<std::uint64_t>(depth + 1)));
    const auto k1 = static_cast<std::int64_t>(rng.below(1ULL << n1));
    const auto k2 = static_cast<std::int64_t>(rng.below(1ULL << n2));
    rects.push_back({{n1, k1}, {n2, k2}});
  }
  return DyadicOpenSet(rects);
}

// ---- strong maximal function ----

double strong_maximal(const SampledFunction2D& f, double x1, double x2) {
  const HalfLineGrid &g1 = f.grid1, &g2 = f.grid2;
  const auto n1 = static_cast<long>(g1.size()), n2 = static_cast<long>(g2.size());
  // bilinear value, the limit of shrinking rectangles
  double best = 0.0;
  {
    MirroredFunction2D m = odd_extension(SampledFunction2D(g1, g2, f.values.cwiseAbs()));
    best = std::abs(m(x1, x2));
  }
  if (x1 < g1.min() || x1 > g1.max() || x2 < g2.min() || x2 > g2.max()) return best;
  // trapezoid cell integrals of |f| and their 2D prefix sums
  std::vector<double> P(static_cast<std::size_t>(n1 * n2), 0.0);
  auto at = [&](long a, long b) -> double& { return P[static_cast<std::size_t>(a * n2 + b)]; };
  for (long a = 1; a < n1; ++a)
    for (long b = 1; b < n2; ++b) {
      const double c = 0.25 * (g1[a] - g1[a - 1]) * (g2[b] - g2[b - 1]) *
                       (std::abs(f.values(a, b)) + std::abs(f.values(a - 1, b)) +
                        std::abs(f.values(a, b - 1)) + std::abs(f.values(a - 1, b - 1)));
      at(a, b) = c + at(a - 1, b) + at(a, b - 1) - at(a - 1, b - 1);
    }
  const long i = static_cast<long>(g1.locate(x1)), j = static_cast<long>(g2.locate(x2));
  // rectangles [x_a, x_b] x [y_c, y_d] with a <= i < b (or x1 on a node) ...
  for (long a = 0; a <= i + 1 && a < n1; ++a) {
    if (g1[a] > x1) break;
    for (long b = std::max(a + 1, i); b < n1; ++b) {
      if (g1[b] < x1) continue;
      for (long c = 0; c <= j + 1 && c < n2; ++c) {
        if (g2[c] > x2) break;
        for (long d = std::max(c + 1, j); d < n2; ++d) {
          if (g2[d] < x2) continue;
          const double integral = at(b, d) - at(a, d) - at(b, c) + at(a, c);
          const double area = (g1[b] - g1[a]) * (g2[d] - g2[c]);
          best = std::max(best, integral / area);
        }
      }
    }
  }
  return best;
}

// ---- frames on Carleson boxes ----

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct AxisSplit {
  // for generation index gi (n = nmin + gi): nonempty intervals and their node ranges
  std::vector<std::vector<std::int64_t>> k;
  std::vector<std::vector<std::pair<long, long>>> nodes;  // [begin, end)
};

AxisSplit split_axis(const HalfLineGrid& g, int nmin, int nmax) {
  AxisSplit s;
  for (int n = nmin; n <= nmax; ++n) {
    std::vector<std::int64_t> ks;
    std::vector<std::pair<long, long>> rng;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto k = static_cast<std::int64_t>(std::ceil(std::ldexp(g[i], n))) - 1;
      if (ks.empty() || ks.back() != k) {
        ks.push_back(k);
        rng.push_back({static_cast<long>(i), static_cast<long>(i) + 1});
      } else {
        rng.back().second = static_cast<long>(i) + 1;
      }
    }
    s.k.push_back(std::move(ks));
    s.nodes.push_back(std::move(rng));
  }
  return s;
}

// Box lattice: spg midpoints in ln t over [2^{-n-1}, 2^{-n}).
std::vector<double> box_scales(int n, int spg) {
  std::vector<double> t(static_cast<std::size_t>(spg));
  for (int m = 0; m < spg; ++m)
    t[static_cast<std::size_t>(m)] = std::ldexp(1.0, -n - 1) * std::exp2((m + 0.5) / spg);
  return t;
}

struct BoxFrames {
  int nmin = 0, nmax = 0, spg = 4;
  std::vector<std::vector<Eigen::MatrixXd>> theta1, theta2;  // [gen][m]
  std::vector<std::vector<Eigen::MatrixXd>> psi1, psi2;
  AxisSplit s1, s2;
  int gens() const { return nmax - nmin + 1; }
};

BoxFrames box_frames(const BesselParams& p, const SampledFunction2D& f, int depth, int spg,
                     const KernelConfig& cfg, int M, bool with_psi) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  if (spg < 1) throw std::invalid_argument("scales_per_generation must be >= 1");
  BoxFrames b;
  b.nmin = -depth;
  b.nmax = depth;
  b.spg = spg;
  b.s1 = split_axis(f.grid1, b.nmin, b.nmax);
  b.s2 = split_axis(f.grid2, b.nmin, b.nmax);
  auto build = [&](const HalfLineGrid& g, std::vector<std::vector<Eigen::MatrixXd>>& th,
                   std::vector<std::vector<Eigen::MatrixXd>>& ps) {
    SpectralCalculus sc(p, g, cfg);
    for (int n = b.nmin; n <= b.nmax; ++n) {
      th.emplace_back();
      ps.emplace_back();
      for (double t : box_scales(n, spg)) {
        th.back().push_back(sc.multiplier_matrix([t](double z) { return t * z * std::exp(-t * z); }));
        if (with_psi)
          ps.back().push_back(sc.multiplier_matrix([t, M](double z) {
            const double s = t * z;
            return std::pow(s, M + 1) * std::exp(-s * s);
          }));
      }
    }
  };
  build(f.grid1, b.theta1, b.psi1);
  if (f.grid1 == f.grid2) {
    b.theta2 = b.theta1;
    b.psi2 = b.psi1;
  } else {
    build(f.grid2, b.theta2, b.psi2);
  }
  return b;
}

Eigen::VectorXd wvec(const HalfLineGrid& g) {
  return Eigen::Map<const Eigen::VectorXd>(g.weights().data(), static_cast<Eigen::Index>(g.size()));
}

void require_uniform(const HalfLineGrid& g) {
  if (g.kind() != GridKind::Uniform) throw std::invalid_argument("dyadic analysis needs uniform grids");
}

// Omega_tilde of a node set on a uniform grid, one cell per node.
CellSet enlarged_nodes(const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask,
                       const HalfLineGrid& g1, const HalfLineGrid& g2) {
  CellSet c(mask.rows(), mask.cols(), g1.spacing(), g2.spacing());
  for (Eigen::Index a = 0; a < mask.rows(); ++a)
    for (Eigen::Index b = 0; b < mask.cols(); ++b)
      if (mask(a, b)) c.set(a, b);
  return c.enlarged();
}

}  // namespace

// ---- atomic decomposition ----

SampledFunction2D AtomicDecomposition::reconstruction() const {
  if (atoms.empty()) throw std::logic_error("empty decomposition has no grid");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(atoms.front().atom.values.rows(), atoms.front().atom.values.cols());
  for (const Atom& a : atoms) s += a.coefficient * a.atom.values;
  return atoms.front().atom.with_values(std::move(s));
}

double AtomicDecomposition::coefficient_sum() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += std::abs(a.coefficient);
  return s;
}

AtomicDecomposition atomic_decompose(const BesselParams& p, const SampledFunction2D& fin,
                                     const AtomicOptions& opt, const KernelConfig& cfg) {
  if (opt.M < 1) throw std::invalid_argument("M must be >= 1");
  if (opt.padding < 1) throw std::invalid_argument("padding must be >= 1");
  require_uniform(fin.grid1);
  require_uniform(fin.grid2);
  AtomicDecomposition out;
  if (fin.values.cwiseAbs().maxCoeff() == 0.0) throw DegenerateInput("area function vanishes to machine precision");
  // f extended by zero so the large-t frames are not cut at the window edge
  auto padded = [&](const HalfLineGrid& g) {
    return opt.padding == 1 ? g
                            : HalfLineGrid::uniform(g.min(), g.min() + opt.padding * (g.max() - g.min() + g.spacing()) - g.spacing(),
                                                    g.size() * static_cast<std::size_t>(opt.padding));
  };
  const SampledFunction2D f = [&] {
    if (opt.padding == 1) return fin;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(fin.values.rows() * opt.padding, fin.values.cols() * opt.padding);
    v.topLeftCorner(fin.values.rows(), fin.values.cols()) = fin.values;
    return SampledFunction2D(padded(fin.grid1), padded(fin.grid2), std::move(v));
  }();

  const BoxFrames B = box_frames(p, f, opt.depth, opt.scales_per_generation, cfg, opt.M, true);
  const int G = B.gens();
  const Eigen::Index n1 = f.values.rows(), n2 = f.values.cols();
  const double om = kLn2 / opt.scales_per_generation;

  // sup of |Theta| over each box pair, per node
  std::vector<Eigen::MatrixXd> boxmax(static_cast<std::size_t>(G * G), Eigen::MatrixXd::Zero(n1, n2));
  for (int a = 0; a < G; ++a)
    for (const auto& T1 : B.theta1[static_cast<std::size_t>(a)]) {
      const Eigen::MatrixXd Y = T1 * f.values;
      for (int b = 0; b < G; ++b) {
        auto& mx = boxmax[static_cast<std::size_t>(a * G + b)];
        for (const auto& T2 : B.theta2[static_cast<std::size_t>(b)])
          mx = mx.cwiseMax((Y * T2.transpose()).cwiseAbs());
      }
    }

  // s_R and the discrete area function
  struct Rect {
    int a, b;  // generation indices
    std::size_t i, j;
    double s;
    int ell = 0;
  };
  std::vector<Rect> rects;
  Eigen::MatrixXd area2 = Eigen::MatrixXd::Zero(n1, n2);
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b) {
      const double len = std::ldexp(1.0, -(B.nmin + a)) * std::ldexp(1.0, -(B.nmin + b));
      const auto& mx = boxmax[static_cast<std::size_t>(a * G + b)];
      const auto& N1 = B.s1.nodes[static_cast<std::size_t>(a)];
      const auto& N2 = B.s2.nodes[static_cast<std::size_t>(b)];
      for (std::size_t i = 0; i < N1.size(); ++i)
        for (std::size_t j = 0; j < N2.size(); ++j) {
          const auto blk = mx.block(N1[i].first, N2[j].first, N1[i].second - N1[i].first,
                                    N2[j].second - N2[j].first);
          const double s = std::sqrt(len) * blk.maxCoeff();
          if (!(s > 0.0)) continue;
          rects.push_back({a, b, i, j, s});
          area2.block(N1[i].first, N2[j].first, N1[i].second - N1[i].first,
                      N2[j].second - N2[j].first)
              .array() += s * s / len;
        }
    }
  const Eigen::MatrixXd area = area2.cwiseSqrt();
  const Eigen::VectorXd w1 = wvec(f.grid1), w2 = wvec(f.grid2);
  out.area_l1 = w1.dot(area * w2);
  if (!(out.area_l1 > std::numeric_limits<double>::min() * 1e3))
    throw DegenerateInput("area function vanishes to machine precision");

  // levels
  double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
  for (Eigen::Index a = 0; a < n1; ++a)
    for (Eigen::Index b = 0; b < n2; ++b)
      if (area(a, b) > 0.0) {
        smin = std::min(smin, area(a, b));
        smax = std::max(smax, area(a, b));
      }
  const int lmin = static_cast<int>(std::floor(std::log2(smin))) - 1;
  const int lmax = static_cast<int>(std::ceil(std::log2(smax)));
  // |R cap Omega_l| / |R| via node weights; largest l with share > 1/2
  for (Rect& r : rects) {
    const auto& I = B.s1.nodes[static_cast<std::size_t>(r.a)][r.i];
    const auto& J = B.s2.nodes[static_cast<std::size_t>(r.b)][r.j];
    double tot = 0.0;
    std::vector<std::pair<double, double>> vals;
    for (long x = I.first; x < I.second; ++x)
      for (long y = J.first; y < J.second; ++y) {
        vals.push_back({area(x, y), w1[x] * w2[y]});
        tot += w1[x] * w2[y];
      }
    r.ell = lmin;
    for (int l = lmin; l <= lmax; ++l) {
      const double thr = std::ldexp(1.0, l);
      double in = 0.0;
      for (const auto& [v, w] : vals)
        if (v > thr) in += w;
      if (in > 0.5 * tot) r.ell = l;
      else break;
    }
  }

  // reproducing constant: int psi(s) s e^{-s} ds / s
  const double c = [&] {
    const auto rule = quad::gauss_legendre(32);
    double s = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double lo = 0.25 * k, hi = lo + 0.25;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.x[i];
        s += 0.5 * (hi - lo) * rule.w[i] * std::pow(x, opt.M + 1) * std::exp(-x * x - x);
      }
    }
    return s;
  }();

  std::map<int, std::vector<const Rect*>> levels;
  for (const Rect& r : rects) levels[r.ell].push_back(&r);
  for (const auto& [ell, members] : levels) {
    // node masks per generation pair
    std::vector<Eigen::MatrixXd> mask(static_cast<std::size_t>(G * G));
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> omega(n1, n2), dil(n1, n2);
    dil.setConstant(false);
    for (Eigen::Index a = 0; a < n1; ++a)
      for (Eigen::Index b = 0; b < n2; ++b) omega(a, b) = area(a, b) > std::ldexp(1.0, ell);
    Atom atom;
    atom.ell = ell;
    for (const Rect* r : members) {
      auto& m = mask[static_cast<std::size_t>(r->a * G + r->b)];
      if (m.size() == 0) m = Eigen::MatrixXd::Zero(n1, n2);
      const auto& I = B.s1.nodes[static_cast<std::size_t>(r->a)][r->i];
      const auto& J = B.s2.nodes[static_cast<std::size_t>(r->b)][r->j];
      m.block(I.first, J.first, I.second - I.first, J.second - J.first).setOnes();
      const DyadicInterval di{B.nmin + r->a, B.s1.k[static_cast<std::size_t>(r->a)][r->i]};
      const DyadicInterval dj{B.nmin + r->b, B.s2.k[static_cast<std::size_t>(r->b)][r->j]};
      atom.rects.push_back({di, dj});
      // threefold concentric dilate
      for (Eigen::Index x = 0; x < n1; ++x) {
        const double px = f.grid1[static_cast<std::size_t>(x)];
        if (px <= di.lo() - di.length() || px > di.hi() + di.length()) continue;
        for (Eigen::Index y = 0; y < n2; ++y) {
          const double py = f.grid2[static_cast<std::size_t>(y)];
          if (py > dj.lo() - dj.length() && py <= dj.hi() + dj.length()) dil(x, y) = true;
        }
      }
    }
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n1, n2);
    for (int a = 0; a < G; ++a)
      for (std::size_t m1 = 0; m1 < B.theta1[static_cast<std::size_t>(a)].size(); ++m1) {
        bool need = false;
        for (int b = 0; b < G; ++b) need |= mask[static_cast<std::size_t>(a * G + b)].size() != 0;
        if (!need) continue;
        const Eigen::MatrixXd Y = B.theta1[static_cast<std::size_t>(a)][m1] * f.values;
        const auto& P1 = B.psi1[static_cast<std::size_t>(a)][m1];
        Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(n1, n2);
        for (int b = 0; b < G; ++b) {
          const auto& m = mask[static_cast<std::size_t>(a * G + b)];
          if (m.size() == 0) continue;
          for (std::size_t m2 = 0; m2 < B.theta2[static_cast<std::size_t>(b)].size(); ++m2) {
            const auto& T2 = B.theta2[static_cast<std::size_t>(b)][m2];
            const auto& P2 = B.psi2[static_cast<std::size_t>(b)][m2];
            inner.noalias() += (m.cwiseProduct(Y * T2.transpose())) * P2.transpose();
          }
        }
        sum.noalias() += P1 * inner;
      }
    sum *= om * om / (c * c);
    const CellSet tilde = enlarged_nodes(omega, f.grid1, f.grid2);
    atom.tilde_measure = tilde.measure();
    for (Eigen::Index x = 0; x < std::min<Eigen::Index>(n1, tilde.n1()); ++x)
      for (Eigen::Index y = 0; y < std::min<Eigen::Index>(n2, tilde.n2()); ++y)
        if (tilde.get(x, y)) dil(x, y) = true;
    atom.coefficient = std::ldexp(1.0, ell) * atom.tilde_measure;
    if (!(atom.coefficient > 0.0)) atom.coefficient = 1.0;  // Omega_ell empty on the grid
    atom.atom = fin.with_values(sum.topLeftCorner(fin.values.rows(), fin.values.cols()) / atom.coefficient);
    double tot = 0.0, in = 0.0;
    for (Eigen::Index x = 0; x < n1; ++x)
      for (Eigen::Index y = 0; y < n2; ++y) {
        const double e = w1[x] * w2[y] * sum(x, y) * sum(x, y);
        tot += e;
        if (dil(x, y)) in += e;
      }
    atom.support_fraction = tot > 0.0 ? in / tot : 1.0;
    out.atoms.push_back(std::move(atom));
  }
  return out;
}

// ---- BMO ----

CarlesonTable carleson_energies(const BesselParams& p, const SampledFunction2D& bfun,
                                const BmoOptions& opt, const KernelConfig& cfg) {
  const BoxFrames B = box_frames(p, bfun, opt.depth, opt.scales_per_generation, cfg, 1, false);
  const int G = B.gens();
  const Eigen::Index n1 = bfun.values.rows(), n2 = bfun.values.cols();
  const double om = kLn2 / opt.scales_per_generation;
  const Eigen::VectorXd w1 = wvec(bfun.grid1), w2 = wvec(bfun.grid2);
  CarlesonTable out;
  for (int a = 0; a < G; ++a) {
    std::vector<Eigen::MatrixXd> acc(static_cast<std::size_t>(G), Eigen::MatrixXd::Zero(n1, n2));
    for (const auto& T1 : B.theta1[static_cast<std::size_t>(a)]) {
      const Eigen::MatrixXd Y = T1 * bfun.values;
      for (int b = 0; b < G; ++b)
        for (const auto& T2 : B.theta2[static_cast<std::size_t>(b)])
          acc[static_cast<std::size_t>(b)] += om * om * (Y * T2.transpose()).cwiseAbs2();
    }
    for (int b = 0; b < G; ++b) {
      // weight by dy1 dy2
      const Eigen::MatrixXd e = w1.asDiagonal() * acc[static_cast<std::size_t>(b)] * w2.asDiagonal();
      const auto& N1 = B.s1.nodes[static_cast<std::size_t>(a)];
      const auto& N2 = B.s2.nodes[static_cast<std::size_t>(b)];
      for (std::size_t i = 0; i < N1.size(); ++i)
        for (std::size_t j = 0; j < N2.size(); ++j) {
          const double v = e.block(N1[i].first, N2[j].first, N1[i].second - N1[i].first,
                                   N2[j].second - N2[j].first)
                               .sum();
          out.rects.push_back({{B.nmin + a, B.s1.k[static_cast<std::size_t>(a)][i]},
                               {B.nmin + b, B.s2.k[static_cast<std::size_t>(b)][j]}});
          out.energy.push_back(v);
        }
    }
  }
  return out;
}

double carleson_ratio(const CarlesonTable& t, const DyadicOpenSet& omega) {
  if (omega.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < t.rects.size(); ++i)
    if (omega.contains(t.rects[i])) s += t.energy[i];
  return s / omega.measure();
}

double bmo_norm(const BesselParams& p, const SampledFunction2D& bfun, const BmoOptions& opt,
                const KernelConfig& cfg) {
  require_uniform(bfun.grid1);
  require_uniform(bfun.grid2);
  if (bfun.values.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const CarlesonTable T = carleson_energies(p, bfun, opt, cfg);
  const std::size_t N = T.rects.size();

  // single rectangles: sum of the energies of all table rectangles inside
  std::vector<double> single(N, 0.0);
  {
    std::map<std::pair<int, int>, std::vector<std::size_t>> by_gen;
    for (std::size_t i = 0; i < N; ++i) by_gen[{T.rects[i].I.n, T.rects[i].J.n}].push_back(i);
    for (std::size_t i = 0; i < N; ++i) {
      const DyadicRectangle& R0 = T.rects[i];
      double s = 0.0;
      for (const auto& [gen, idx] : by_gen) {
        if (gen.first < R0.I.n || gen.second < R0.J.n) continue;
        for (std::size_t j : idx)
          if (R0.contains(T.rects[j])) s += T.energy[j];
      }
      single[i] = s / R0.area();
    }
  }
  double best = *std::max_element(single.begin(), single.end());

  std::vector<std::size_t> order(N);
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  const std::size_t S = std::min<std::size_t>(N, static_cast<std::size_t>(std::max(opt.seeds, 1)));
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(S), order.end(),
                    [&](std::size_t a, std::size_t b) { return single[a] > single[b]; });
  const std::vector<std::size_t> seeds(order.begin(), order.begin() + static_cast<long>(S));

  // rows and columns: runs of up to four same-generation neighbours
  for (std::size_t s : seeds) {
    const DyadicRectangle R = T.rects[s];
    for (int axis = 1; axis <= 2; ++axis)
      for (int lo = -3; lo <= 0; ++lo)
        for (int len = 2; len <= 4; ++len) {
          if (lo + len - 1 < 0) continue;
          std::vector<DyadicRectangle> run;
          bool ok = true;
          for (int d = lo; d < lo + len; ++d) {
            DyadicRectangle r = R;
            std::int64_t& k = axis == 1 ? r.I.k : r.J.k;
            k += d;
            if (k < 0) ok = false;
            run.push_back(r);
          }
          if (!ok) continue;
          best = std::max(best, carleson_ratio(T, DyadicOpenSet(run)));
        }
  }
  // greedy unions from the best seed over the seed pool
  {
    std::vector<DyadicRectangle> cur{T.rects[seeds.front()]};
    double cur_v = single[seeds.front()];
    for (int step = 0; step < opt.greedy_steps; ++step) {
      double step_best = cur_v;
      std::size_t pick = N;
      for (std::size_t s : seeds) {
        std::vector<DyadicRectangle> cand = cur;
        cand.push_back(T.rects[s]);
        const double v = carleson_ratio(T, DyadicOpenSet(cand));
        if (v > step_best) {
          step_best = v;
          pick = s;
        }
      }
      if (pick == N) break;
      cur.push_back(T.rects[pick]);
      cur_v = step_best;
    }
    best = std::max(best, cur_v);
  }
  return std::sqrt(best);
}

}  // namespace bh
