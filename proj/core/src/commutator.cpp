#include "besselhardy/commutator.hpp"

#include <cmath>

namespace bh {

CommutatorOperators::CommutatorOperators(const BesselParams& p, const HalfLineGrid& g1,
                                         const HalfLineGrid& g2, const KernelConfig& cfg)
    : p_(p), r1_(riesz_matrix(p, g1, RieszRoute::Kernel, cfg)) {
  r2_ = g1 == g2 ? r1_ : riesz_matrix(p, g2, RieszRoute::Kernel, cfg);
}

Eigen::MatrixXd iterated_commutator_values(const CommutatorOperators& ops, const Eigen::MatrixXd& b,
                                           const Eigen::MatrixXd& f) {
  const Eigen::MatrixXd R2f = ops.apply2(f);
  const Eigen::MatrixXd R1f = ops.apply1(f);
  const Eigen::MatrixXd R1R2f = ops.apply1(R2f);
  const Eigen::MatrixXd bf = b.cwiseProduct(f);
  return b.cwiseProduct(R1R2f) - ops.apply1(b.cwiseProduct(R2f)) - ops.apply2(b.cwiseProduct(R1f)) +
         ops.apply2(ops.apply1(bf));
}

Eigen::MatrixXd iterated_commutator_swapped(const CommutatorOperators& ops, const Eigen::MatrixXd& b,
                                            const Eigen::MatrixXd& f) {
  // [[b, R2], R1] f = [b, R2](R1 f) - R1([b, R2] f)
  auto c2 = [&](const Eigen::MatrixXd& h) {
    return Eigen::MatrixXd(b.cwiseProduct(ops.apply2(h)) - ops.apply2(b.cwiseProduct(h)));
  };
  return c2(ops.apply1(f)) - ops.apply1(c2(f));
}

CommutatorResult iterated_commutator(const CommutatorOperators& ops, const SampledFunction2D& b,
                                     const SampledFunction2D& f, double bmo,
                                     const BmoOptions& bmo_opt) {
  if (b.values.rows() != f.values.rows() || b.values.cols() != f.values.cols() ||
      !(b.grid1 == f.grid1) || !(b.grid2 == f.grid2))
    throw std::invalid_argument("b and f must share a grid");
  CommutatorResult r;
  r.output = f.with_values(iterated_commutator_values(ops, b.values, f.values));
  const double out = lp_norm(r.output, 2.0);
  if (out == 0.0) return r;
  r.bmo = bmo >= 0.0 ? bmo : bmo_norm(ops.params(), b, bmo_opt);
  const double fn = lp_norm(f, 2.0);
  r.operator_ratio = out / (r.bmo * fn);
  return r;
}

CommutatorResult iterated_commutator(const BesselParams& p, const SampledFunction2D& b,
                                     const SampledFunction2D& f, const KernelConfig& cfg) {
  const CommutatorOperators ops(p, f.grid1, f.grid2, cfg);
  return iterated_commutator(ops, b, f);
}

namespace {

template <class Row>
void sweep(const BesselParams& p, const std::vector<TestFunction2D>& bs,
           const std::vector<TestFunction2D>& fs, const HalfLineGrid& g, const BmoOptions& bmo_opt,
           const KernelConfig& cfg, Row&& row) {
  if (bs.empty() || fs.empty()) return;
  const CommutatorOperators ops(p, g, g, cfg);
  for (const auto& bf : bs) {
    const SampledFunction2D b = bf.sample(g, g);
    double bmo = -1.0;
    for (const auto& ff : fs) {
      const SampledFunction2D f = ff.sample(g, g);
      const CommutatorResult r = iterated_commutator(ops, b, f, bmo, bmo_opt);
      if (r.bmo > 0.0) bmo = r.bmo;
      row(bf.name, ff.name, r);
    }
  }
}

}  // namespace

VerificationReport commutator_sweep(const BesselParams& p, const std::vector<TestFunction2D>& bs,
                                    const std::vector<TestFunction2D>& fs, const HalfLineGrid& g,
                                    const BmoOptions& bmo_opt, const KernelConfig& cfg) {
  VerificationReport rep;
  double mx = 0.0;
  sweep(p, bs, fs, g, bmo_opt, cfg, [&](const std::string& b, const std::string& f, const CommutatorResult& r) {
    rep.record("commutator_ratio", "b=" + b + " f=" + f, r.operator_ratio);
    mx = std::max(mx, r.operator_ratio);
  });
  if (!rep.empty()) rep.record("commutator_max_ratio", "lambda=" + std::to_string(p.lambda), mx);
  return rep;
}

double commutator_max_ratio(const BesselParams& p, const std::vector<TestFunction2D>& bs,
                            const std::vector<TestFunction2D>& fs, const HalfLineGrid& g,
                            const BmoOptions& bmo_opt, const KernelConfig& cfg) {
  double mx = 0.0;
  sweep(p, bs, fs, g, bmo_opt, cfg,
        [&](const std::string&, const std::string&, const CommutatorResult& r) { mx = std::max(mx, r.operator_ratio); });
  return mx;
}

}  // namespace bh
