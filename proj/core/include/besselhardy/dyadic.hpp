#ifndef BESSELHARDY_DYADIC_HPP
#define BESSELHARDY_DYADIC_HPP

#include "besselhardy/grids.hpp"
#include "besselhardy/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

namespace bh {

// (k / 2^n, (k + 1) / 2^n], k >= 0
struct DyadicInterval {
  int n = 0;
  std::int64_t k = 0;

  double lo() const;
  double hi() const;
  double length() const;
  DyadicInterval parent() const { return {n - 1, k >> 1}; }
  bool contains(const DyadicInterval& o) const;
  auto operator<=>(const DyadicInterval&) const = default;
};

struct DyadicRectangle {
  DyadicInterval I, J;
  double area() const { return I.length() * J.length(); }
  bool contains(const DyadicRectangle& o) const { return I.contains(o.I) && J.contains(o.J); }
  auto operator<=>(const DyadicRectangle&) const = default;
};

// A finite union of dyadic rectangles, kept as a bitmap over the cells of the
// finest generation present in each direction.
class DyadicOpenSet {
 public:
  DyadicOpenSet() = default;
  explicit DyadicOpenSet(const std::vector<DyadicRectangle>& rects);

  bool empty() const { return count_ == 0; }
  double measure() const;
  bool contains(const DyadicRectangle& r) const;
  bool contains_point(double x1, double x2) const;
  // canonical cover: the maximal dyadic subrectangles, sorted
  const std::vector<DyadicRectangle>& rectangles() const { return cover_; }

  // bitmap access; cell (a, b) is (a h1, (a+1) h1] x (b h2, (b+1) h2]
  int gen1() const { return g1_; }
  int gen2() const { return g2_; }
  long cells1() const { return n1_; }
  long cells2() const { return n2_; }
  bool cell(long a, long b) const;

 private:
  friend class CellSet;
  int g1_ = 0, g2_ = 0;
  long n1_ = 0, n2_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<long> prefix_;  // (n1 + 1) x (n2 + 1)
  long count_ = 0;
  std::vector<DyadicRectangle> cover_;
  long box(long a0, long a1, long b0, long b1) const;  // cells in [a0, a1) x [b0, b1)
};

enum class MaximalMode { All, Dir1, Dir2 };

// m(Omega), m_1(Omega) (maximal in the x1 direction) or m_2(Omega). Rectangles
// finer than the bitmap are never listed.
std::vector<DyadicRectangle> maximal_subrectangles(const DyadicOpenSet& omega, MaximalMode mode);

// A boolean image on a uniform cell lattice of size (h1, h2) starting at 0.
class CellSet {
 public:
  CellSet(long n1, long n2, double h1, double h2);
  static CellSet from(const DyadicOpenSet& o);

  long n1() const { return n1_; }
  long n2() const { return n2_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  bool get(long a, long b) const { return bits_[static_cast<std::size_t>(a * n2_ + b)] != 0; }
  void set(long a, long b, bool v = true) { bits_[static_cast<std::size_t>(a * n2_ + b)] = v; }
  long count() const;
  double measure() const { return static_cast<double>(count()) * h1_ * h2_; }
  // true iff every cell of [x0, x1] x [y0, y1] (cell-aligned) is set
  bool covers(double x0, double x1, double y0, double y1) const;
  // {M_s chi > 1/2} over rectangles with corners on the lattice, on a lattice
  // padded so the result fits.
  CellSet enlarged() const;

 private:
  long n1_, n2_;
  double h1_, h2_;
  std::vector<std::uint8_t> bits_;
  mutable std::vector<long> prefix_;
  void build_prefix() const;
};

// gamma_1(R) (axis 1) or gamma_2(R): largest |l| / |I| with l a dyadic
// ancestor of I and l x J inside Omega-tilde.
double journe_gamma(const DyadicOpenSet& omega, const DyadicRectangle& r, int axis);
double journe_gamma(const CellSet& tilde, const DyadicRectangle& r, int axis);
// sum over m_2(Omega) of |R| gamma_1^{-delta}, divided by |Omega| (axis 1), or
// the mirrored quantity (axis 2).
double journe_ratio(const DyadicOpenSet& omega, double delta, int axis = 1);

// x <- 6364136223846793005 x + 1442695040888963407 (mod 2^64); uniform() returns
// the top 53 bits scaled to [0, 1).
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();
  // integer in [0, n)
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

// Union of 1..max_rects dyadic rectangles inside (0,1]^2 with generations in [0, depth].
DyadicOpenSet random_open_set(Lcg& rng, int depth, int max_rects = 8);

// Discrete strong maximal function: sup of rectangle averages of |f| over
// rectangles with corners on grid nodes containing the point, together with
// the shrinking-rectangle limit |f(x)|.
double strong_maximal(const SampledFunction2D& f, double x1, double x2);

struct AtomicOptions {
  int M = 1;
  int depth = 6;
  int scales_per_generation = 4;
  int padding = 2;  // frames computed on a window this many times larger, f extended by zero
};

struct Atom {
  int ell = 0;
  double coefficient = 0.0;           // lambda_ell = 2^ell |Omega-tilde_ell|
  SampledFunction2D atom;             // a_ell
  std::vector<DyadicRectangle> rects; // B_ell
  double tilde_measure = 0.0;         // |Omega-tilde_ell|
  double support_fraction = 0.0;      // share of ||a||_2^2 on Omega-tilde_ell and the 3-fold dilates of B_ell
};

struct AtomicDecomposition {
  std::vector<Atom> atoms;
  double area_l1 = 0.0;  // || discrete area function ||_1
  SampledFunction2D reconstruction() const;
  double coefficient_sum() const;
};

class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AtomicDecomposition atomic_decompose(const BesselParams& p, const SampledFunction2D& f,
                                     const AtomicOptions& opt = {}, const KernelConfig& cfg = {});

struct BmoOptions {
  int depth = 6;
  int scales_per_generation = 4;
  int seeds = 24;       // single rectangles that seed row/column/greedy candidates
  int greedy_steps = 8;
};
double bmo_norm(const BesselParams& p, const SampledFunction2D& b, const BmoOptions& opt = {},
                const KernelConfig& cfg = {});

// Carleson energy S_R^2(b) of every nonempty dyadic rectangle within the depth.
struct CarlesonTable {
  std::vector<DyadicRectangle> rects;
  std::vector<double> energy;
};
CarlesonTable carleson_energies(const BesselParams& p, const SampledFunction2D& b,
                                const BmoOptions& opt = {}, const KernelConfig& cfg = {});
// (1 / |Omega|) sum_{R in table, R inside Omega} S_R^2
double carleson_ratio(const CarlesonTable& t, const DyadicOpenSet& omega);

}  // namespace bh

#endif
