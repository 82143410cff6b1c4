#ifndef BESSELHARDY_COMMUTATOR_HPP
#define BESSELHARDY_COMMUTATOR_HPP

#include "besselhardy/dyadic.hpp"
#include "besselhardy/families.hpp"
#include "besselhardy/grids.hpp"
#include "besselhardy/kernels.hpp"
#include "besselhardy/report.hpp"

#include <Eigen/Dense>

#include <vector>

namespace bh {

struct CommutatorResult {
  SampledFunction2D output;
  double operator_ratio = 0.0;  // ||output||_2 / (||b||_BMO ||f||_2), 0 when output == 0
  double bmo = 0.0;
};

// Riesz matrices per axis (kernel route) for repeated use on one grid.
class CommutatorOperators {
 public:
  CommutatorOperators(const BesselParams& p, const HalfLineGrid& g1, const HalfLineGrid& g2,
                      const KernelConfig& cfg = {});
  const BesselParams& params() const { return p_; }
  const Eigen::MatrixXd& R1() const { return r1_; }
  const Eigen::MatrixXd& R2() const { return r2_; }
  // R1 acts on the first index (columns of the value matrix), R2 on the second.
  Eigen::MatrixXd apply1(const Eigen::MatrixXd& v) const { return r1_ * v; }
  Eigen::MatrixXd apply2(const Eigen::MatrixXd& v) const { return v * r2_.transpose(); }

 private:
  BesselParams p_;
  Eigen::MatrixXd r1_, r2_;
};

// b R1 R2 f - R1(b R2 f) - R2(b R1 f) + R2 R1 (b f)
Eigen::MatrixXd iterated_commutator_values(const CommutatorOperators& ops, const Eigen::MatrixXd& b,
                                           const Eigen::MatrixXd& f);
// The same with the nesting order swapped, [[b, R2], R1].
Eigen::MatrixXd iterated_commutator_swapped(const CommutatorOperators& ops, const Eigen::MatrixXd& b,
                                            const Eigen::MatrixXd& f);

// bmo < 0 means compute it with bmo_norm at the given options.
CommutatorResult iterated_commutator(const CommutatorOperators& ops, const SampledFunction2D& b,
                                     const SampledFunction2D& f, double bmo = -1.0,
                                     const BmoOptions& bmo_opt = {});
CommutatorResult iterated_commutator(const BesselParams& p, const SampledFunction2D& b,
                                     const SampledFunction2D& f, const KernelConfig& cfg = {});

// One row per (b, f) pair with its ratio, plus the max ratio. Rows pass iff finite.
VerificationReport commutator_sweep(const BesselParams& p, const std::vector<TestFunction2D>& bs,
                                    const std::vector<TestFunction2D>& fs, const HalfLineGrid& g,
                                    const BmoOptions& bmo_opt = {}, const KernelConfig& cfg = {});
// Max ratio over the sweep (0 for empty families).
double commutator_max_ratio(const BesselParams& p, const std::vector<TestFunction2D>& bs,
                            const std::vector<TestFunction2D>& fs, const HalfLineGrid& g,
                            const BmoOptions& bmo_opt = {}, const KernelConfig& cfg = {});

}  // namespace bh

#endif
