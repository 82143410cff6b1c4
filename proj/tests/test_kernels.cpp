#include "besselhardy/kernels.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace bh;

namespace {

const double kPi = std::numbers::pi;

double heat_l1(double t, double x, double y) {
  return (std::exp(-(x - y) * (x - y) / (4 * t)) - std::exp(-(x + y) * (x + y) / (4 * t))) / std::sqrt(4 * kPi * t);
}
double poisson_l1(double t, double x, double y) {
  return (t / (t * t + (x - y) * (x - y)) - t / (t * t + (x + y) * (x + y))) / kPi;
}

double heat_l2(double t, double x, double y) {
  const double a = std::exp(-(x - y) * (x - y) / (4 * t)), b = std::exp(-(x + y) * (x + y) / (4 * t));
  return (a * (1 - 2 * t / (x * y)) + b * (1 + 2 * t / (x * y))) / std::sqrt(4 * kPi * t);
}

// Subordination over the closed-form half-integer heat kernels, by exp-sinh quadrature.
double poisson_oracle(double lambda, double t, double x, double y) {
  auto W = [&](double s) { return lambda == 1.0 ? heat_l1(s, x, y) : heat_l2(s, x, y); };
  auto f = [&](double s) { return std::exp(-1 / (4 * s)) * std::pow(s, -1.5) * W(t * t * s); };
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f) / (2 * std::sqrt(kPi));
}

double rel_l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const HalfLineGrid& g) {
  const Eigen::Map<const Eigen::VectorXd> w(g.weights().data(), static_cast<Eigen::Index>(g.size()));
  return std::sqrt((a - b).cwiseAbs2().dot(w) / b.cwiseAbs2().dot(w));
}

Eigen::VectorXd vec(const SampledFunction1D& f) { return f.vec(); }

}  // namespace

TEST(HeatKernel, LambdaOneClosedForm) {
  const BesselParams p(1.0);
  EXPECT_NEAR(heat_kernel(p, 1, 1, 1), (1 - std::exp(-1.0)) / (2 * std::sqrt(kPi)), 1e-14);
  for (double t : {0.01, 0.3, 5.0})
    for (double x : {0.05, 0.7, 3.0})
      for (double y : {0.1, 1.1, 8.0}) {
        const double r = heat_l1(t, x, y);
        if (r < 1e-250) continue;
        EXPECT_NEAR(heat_kernel(p, t, x, y) / r, 1.0, 1e-10) << t << ' ' << x << ' ' << y;
      }
}

TEST(HeatKernel, LambdaTwoClosedForm) {
  const BesselParams p(2.0);
  for (double t : {0.05, 0.5, 4.0})
    for (double x : {0.2, 1.0, 3.0})
      for (double y : {0.3, 2.5}) {
        const double r = heat_l2(t, x, y);
        if (r < 1e-200) continue;
        EXPECT_NEAR(heat_kernel(p, t, x, y) / r, 1.0, 1e-8) << t << ' ' << x << ' ' << y;
      }
}

TEST(HeatKernel, SymmetryAndGaussianDecay) {
  for (double lam : {0.7, 1.5, 2.0, 4.0}) {
    const BesselParams p(lam);
    for (double t : {0.02, 1.0, 30.0})
      EXPECT_EQ(heat_kernel(p, t, 0.3, 2.9), heat_kernel(p, t, 2.9, 0.3));
  }
  const double v = heat_kernel(BesselParams(2.0), 0.1, 1.0, 10.0);
  EXPECT_GE(v, 0.0);
  EXPECT_LT(v, 1e-80);
  EXPECT_LE(v, std::pow(0.2, -0.5) * 0.4 * std::exp(-81 / 0.4));
}

TEST(ClaimC, Examples) {
  const BesselParams p(1.0);
  EXPECT_NEAR(claim_c_value(p, 20.0), std::sqrt(2 / kPi) * (1 - std::exp(-40.0)) / 2, 1e-8);
  EXPECT_LT(claim_c_value(p, 1e-12), 1e-5);
  for (double lam : {1.5, 2.0, 3.0}) {
    double s = 0.0;
    for (double u = 1e-6; u < 1e6; u *= 1.01) s = std::max(s, claim_c_value(BesselParams(lam), u));
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_LE(s, 1 / std::sqrt(2 * kPi) + 1e-9);
  }
}

TEST(PoissonKernel, LambdaOneExample) {
  EXPECT_NEAR(poisson_kernel_subordination(BesselParams(1.0), {}, 1, 1, 1), 4 / (5 * kPi), 1e-8);
}

TEST(PoissonKernel, SubordinationMatchesIndependentQuadrature) {
  for (double lam : {1.0, 2.0})
    for (double t : {0.2, 1.0, 3.0})
      for (double x : {0.3, 1.0, 2.5})
        for (double y : {0.5, 2.0}) {
          const double a = poisson_kernel_subordination(BesselParams(lam), {}, t, x, y);
          EXPECT_NEAR(a, poisson_oracle(lam, t, x, y), 1e-8) << lam << ' ' << t << ' ' << x << ' ' << y;
          if (lam == 1.0) EXPECT_NEAR(a, poisson_l1(t, x, y), 1e-8);
        }
}

TEST(PoissonKernel, SpectralRouteAgrees) {
  for (double lam : {1.5, 2.5})
    for (double t : {0.3, 1.0})
      for (double x : {0.5, 2.0})
        for (double y : {0.4, 3.0})
          EXPECT_NEAR(poisson_kernel_spectral(BesselParams(lam), t, x, y),
                      poisson_kernel_subordination(BesselParams(lam), {}, t, x, y), 1e-7);
}

TEST(PoissonKernel, DecaysForLargeT) {
  const BesselParams p(2.0);
  double prev = poisson_kernel_subordination(p, {}, 10, 1, 2);
  for (double t : {100.0, 1e3, 1e4}) {
    const double v = poisson_kernel_subordination(p, {}, t, 1, 2);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-12);
}

TEST(QDerivKernel, LambdaOneClosedForm) {
  auto ref = [](double t, double x, double y) {
    const double a = x - y, b = x + y;
    return (t * (t * t - a * a) / std::pow(t * t + a * a, 2) - t * (t * t - b * b) / std::pow(t * t + b * b, 2)) / kPi;
  };
  for (double t : {0.5, 1.0, 2.0})
    for (double x : {0.4, 1.5})
      for (double y : {0.8, 2.2}) EXPECT_NEAR(q_deriv_kernel(BesselParams(1.0), t, x, y), ref(t, x, y), 1e-7);
}

TEST(Hankel, SineTransformOfExponential) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.0025, 45.0, 18000, OriginCell::Linear);
  const auto f = SampledFunction1D::sample(g, [](double y) { return std::exp(-y); });
  const HalfLineGrid out = HalfLineGrid::uniform(0.1, 5.0, 50);
  const auto h = hankel_transform(BesselParams(1.0), f, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = out[i];
    EXPECT_NEAR(h.values[i], std::sqrt(2 / kPi) * x / (1 + x * x), 1e-5) << x;
  }
}

TEST(Hankel, GaussianIsSelfReciprocal) {
  // y^{nu+1/2} e^{-y^2/2} is a fixed point of H_lambda
  for (double lam : {1.0, 1.5, 2.0, 3.0}) {
    const double nu = lam - 0.5;
    auto f = [nu](double y) { return std::pow(y, nu + 0.5) * std::exp(-y * y / 2); };
    const HalfLineGrid g = HalfLineGrid::uniform(0.02, 12.0, 600, OriginCell::Linear);
    const auto h = hankel_transform(BesselParams(lam), SampledFunction1D::sample(g, f), g);
    EXPECT_LT(rel_l2(vec(h), vec(SampledFunction1D::sample(g, f)), g), 1e-5) << lam;
  }
}

TEST(Hankel, PlancherelAndInvolution) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.02, 20.0, 1000, OriginCell::Linear);
  const std::vector<std::function<double(double)>> fs = {
      [](double x) { return std::exp(-(x - 3) * (x - 3)); },
      [](double x) { return x * x * std::exp(-x); },
      [](double x) { return std::sin(2 * x) * std::exp(-(x - 4) * (x - 4) / 2); },
      [](double x) { return std::pow(x, 3) * std::exp(-x * x / 2); },
  };
  for (double lam : {1.0, 1.5, 2.0, 3.0}) {
    const SpectralCalculus sc(BesselParams(lam), g);
    const auto& zw = sc.frequency().weights();
    const Eigen::Map<const Eigen::VectorXd> wz(zw.data(), static_cast<Eigen::Index>(zw.size()));
    const Eigen::Map<const Eigen::VectorXd> wx(g.weights().data(), static_cast<Eigen::Index>(g.size()));
    for (const auto& fn : fs) {
      const Eigen::VectorXd f = vec(SampledFunction1D::sample(g, fn));
      const Eigen::VectorXd F = sc.forward(f);
      const double nf = std::sqrt(f.cwiseAbs2().dot(wx)), nF = std::sqrt(F.cwiseAbs2().dot(wz));
      EXPECT_NEAR(nF / nf, 1.0, 1e-4) << lam;
      EXPECT_LT(rel_l2(sc.backward(F), f, g), 1e-4) << lam;
    }
  }
}

TEST(SpectralApply, HeatMatchesKernelQuadrature) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.02, 16.0, 800);
  const auto f = SampledFunction1D::sample(g, [](double x) { return std::exp(-(x - 4) * (x - 4)); });
  for (double lam : {1.0, 2.0}) {
    const BesselParams p(lam);
    const double t = 0.5;
    const auto u = spectral_apply(p, [t](double z) { return std::exp(-t * z * z); }, f);
    Eigen::VectorXd ref(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) s += g.weights()[j] * heat_kernel(p, t, g[i], g[j]) * f.values[j];
      ref[static_cast<Eigen::Index>(i)] = s;
    }
    EXPECT_LT(rel_l2(vec(u), ref, g), 1e-5) << lam;
    const auto id = spectral_apply(p, [](double) { return 1.0; }, f);
    EXPECT_LT(rel_l2(vec(id), vec(f), g), 1e-4);
  }
}

TEST(SpectralApply, PoissonDerivativeByFiniteDifference) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.02, 20.0, 1000);
  const auto f = SampledFunction1D::sample(g, [](double x) { return x * std::exp(-(x - 3) * (x - 3)); });
  const BesselParams p(1.5);
  const auto q = spectral_apply(p, [](double z) { return z * std::exp(-z); }, f);
  auto P = [&](double t) { return vec(spectral_apply(p, [t](double z) { return std::exp(-t * z); }, f)); };
  double prev = 0.0;
  for (double d : {0.1, 0.05, 0.025}) {
    const Eigen::VectorXd fd = -(P(1 + d) - P(1 - d)) / (2 * d);
    const double e = rel_l2(fd, vec(q), g);
    if (prev > 0) EXPECT_NEAR(prev / e, 4.0, 0.2);
    prev = e;
  }
}

TEST(ConjugatePoisson, KernelMatchesHankelRoute) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.025, 30.0, 1200);
  const auto f = SampledFunction1D::sample(g, [](double x) { return std::exp(-(x - 3) * (x - 3)); });
  for (double lam : {1.0, 2.0}) {
    const BesselParams p(lam);
    const double t = 0.5;
    const SpectralCalculus sc(p, g);
    const Eigen::VectorXd h = sc.apply([t](double z) { return std::exp(-t * z); }, vec(f), 0, 1);
    const HalfLineGrid xs = HalfLineGrid::uniform(0.5, 6.0, 12);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (f.values[j] > 1e-14) s += g.weights()[j] * conj_poisson_kernel(p, {}, t, xs[i], g[j]) * f.values[j];
      const auto k = g.locate(xs[i]);
      const double hv = h[static_cast<Eigen::Index>(k)] +
                        (xs[i] - g[k]) / (g[k + 1] - g[k]) * (h[static_cast<Eigen::Index>(k + 1)] - h[static_cast<Eigen::Index>(k)]);
      EXPECT_NEAR(s, hv, 1e-3) << lam << ' ' << xs[i];
    }
  }
}

TEST(Riesz, IsometryAndRouteAgreement) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.02, 40.0, 2000);
  const auto f = SampledFunction1D::sample(g, [](double x) { return std::exp(-(x - 3) * (x - 3)); });
  for (double lam : {1.0, 1.5, 2.0, 3.0}) {
    const BesselParams p(lam);
    const auto rk = riesz_apply(p, f, RieszRoute::Kernel);
    const auto rh = riesz_apply(p, f, RieszRoute::Hankel);
    EXPECT_NEAR(lp_norm(rk, 2.0) / lp_norm(f, 2.0), 1.0, 1e-3) << lam;
    EXPECT_LT(rel_l2(vec(rk), vec(rh), g), 1e-3) << lam;
  }
}

TEST(Riesz, TableMatchesDirectQuadrature) {
  for (double lam : {1.0, 2.0}) {
    const BesselParams p(lam);
    const RieszKernel& K = riesz_kernel(p);
    for (double s : {1e-3, 0.1, 0.45, 0.8, 0.97, 1.02, 1.3, 2.0, 9.0, 300.0})
      EXPECT_NEAR(K.rho(s), RieszKernel::rho_direct(p, s), 1e-6 * std::max(1.0, std::abs(K.rho(s)))) << lam << ' ' << s;
  }
}

TEST(Riesz, NearDiagonalLeadingTerm) {
  // rho(s) - (1/pi)/(1 - s) grows at most like a logarithm of |1 - s|
  for (double lam : {1.0, 2.0}) {
    const BesselParams p(lam);
    double lo = 1e300, hi = 0.0;
    for (double e : {1e-2, 1e-3, 1e-4, 1e-5})
      for (double s : {1 - e, 1 + e}) {
        const double dev = std::abs(RieszKernel::rho_direct(p, s) - 1 / (kPi * (1 - s)));
        const double r = dev / (1 + std::max(0.0, std::log(std::sqrt(s) / e)));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    EXPECT_LT(hi, 2.0) << lam;
    EXPECT_LT(hi / lo, 3.0) << lam;
    // the tabulated remainder is bounded on the near window
    double m = 0.0;
    for (double s = 0.5005; s < 1.5; s += 0.001) m = std::max(m, std::abs(riesz_kernel(p).remainder(s)));
    EXPECT_TRUE(std::isfinite(m));
    EXPECT_LT(m, 5.0);
  }
}

TEST(Riesz, FarFieldBounds) {
  for (double lam : {1.0, 1.5, 2.0, 3.0}) {
    const RieszKernel& K = riesz_kernel(BesselParams(lam));
    double c0 = 0.0, c1 = 0.0;
    for (double s = 1e-4; s < 0.5; s *= 1.3) c0 = std::max(c0, std::abs(K.rho(s)) / std::pow(s, lam));
    for (double s = 2.0; s < 1e4; s *= 1.3) c1 = std::max(c1, std::abs(K.rho(s)) * std::pow(s, lam + 2));
    EXPECT_TRUE(std::isfinite(c0) && c0 < 50) << lam;
    EXPECT_TRUE(std::isfinite(c1) && c1 < 50) << lam;
    // the small-s power law is sharp: the ratio settles
    const double a = std::abs(K.rho(1e-3)) / std::pow(1e-3, lam), b = std::abs(K.rho(1e-4)) / std::pow(1e-4, lam);
    EXPECT_NEAR(a / b, 1.0, 0.05) << lam;
  }
}
