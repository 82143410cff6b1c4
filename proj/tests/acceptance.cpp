// Acceptance run: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [criterion numbers...]

#include "besselhardy/dyadic.hpp"
#include "besselhardy/product_ops.hpp"
#include "besselhardy/singular.hpp"
#include "besselhardy/suites.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace bh;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

// "check=lo..hi/bound" per check, in first-seen order, plus the failing rows
std::string summarize(const VerificationReport& r) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<double, double>> range;
  std::map<std::string, std::optional<double>> bound;
  std::string failed;
  for (const auto& row : r.rows()) {
    auto [it, fresh] = range.try_emplace(row.check, row.value, row.value);
    if (fresh) order.push_back(row.check);
    it->second.first = std::min(it->second.first, row.value);
    it->second.second = std::max(it->second.second, row.value);
    if (row.bound) bound[row.check] = row.bound;
    if (!row.pass) failed += " [" + row.check + " " + row.parameter + " = " + num(row.value) + "]";
  }
  std::string s;
  for (const auto& c : order) {
    const auto [lo, hi] = range[c];
    s += " " + c + "=" + (lo == hi ? num(lo) : num(lo) + ".." + num(hi));
    if (bound[c]) s += "/" + num(*bound[c]);
  }
  return failed.empty() ? s : s + " FAILED:" + failed;
}

Outcome from_suite(const std::string& name, const RunConfig& cfg = {}) {
  const VerificationReport r = run_suite(name, cfg);
  return {!r.empty() && r.all_pass(), summarize(r)};
}

double rel_l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const std::vector<double>& w) {
  const Eigen::Map<const Eigen::VectorXd> W(w.data(), static_cast<Eigen::Index>(w.size()));
  return std::sqrt((a - b).cwiseAbs2().dot(W) / b.cwiseAbs2().dot(W));
}

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13);
}

double heat_l1(double t, double x, double y) {
  // expm1 form: exact cancellation for small x y / t
  const double g = std::exp(-(x - y) * (x - y) / (4 * t));
  return -g * std::expm1(-x * y / t) / std::sqrt(4 * kPi * t);
}

double poisson_l1(double t, double x, double y) {
  return (t / (t * t + (x - y) * (x - y)) - t / (t * t + (x + y) * (x + y))) / kPi;
}

// 20 x 20 spatial points, 5 times
const std::vector<double>& lattice_xy() {
  static const std::vector<double> v = [] {
    std::vector<double> r;
    for (int k = 1; k <= 20; ++k) r.push_back(0.2 * k);
    return r;
  }();
  return v;
}
const std::vector<double> kLatticeT = {0.1, 0.25, 0.5, 1.0, 2.0};

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double t : kLatticeT)
    for (double x : lattice_xy())
      for (double y : lattice_xy()) {
        const double ref = heat_l1(t, x, y);
        worst = std::max(worst, std::abs(heat_kernel(BesselParams(1.0), t, x, y) - ref) / std::abs(ref));
      }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-10 && sec < 1.0, "max rel err " + num(worst) + " (1e-10), " + num(sec) + " s (< 1 s)"};
}

Outcome c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const BesselParams p(1.0);
  double e_sub = 0.0, e_spec = 0.0;
  for (double t : kLatticeT)
    for (double x : lattice_xy())
      for (double y : lattice_xy()) {
        const double sub = poisson_kernel_subordination(p, {}, t, x, y);
        e_sub = std::max(e_sub, std::abs(sub - poisson_l1(t, x, y)));
        e_spec = std::max(e_spec, std::abs(poisson_kernel_spectral(p, t, x, y) - sub));
      }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {e_sub <= 1e-6 && e_spec <= 1e-5 && sec < 30.0,
          "subordination vs closed form " + num(e_sub) + " (1e-6), spectral vs subordination " + num(e_spec) +
              " (1e-5), " + num(sec) + " s (< 30 s)"};
}

Outcome c3() {
  const double s1 = claim_c_sup(BesselParams(1.0));
  Outcome o{std::abs(s1 - 0.398942) <= 1e-5, "lambda=1 sup " + num(s1) + " (0.398942 +- 1e-5)"};
  for (double lam : {1.5, 2.0, 3.0}) {
    const double s = claim_c_sup(BesselParams(lam));
    o.pass = o.pass && std::isfinite(s);
    o.detail += ", lambda=" + num(lam) + " sup " + num(s);
  }
  return o;
}

Outcome c5() {
  const std::vector<std::function<double(double)>> fs = {
      [](double x) { return std::exp(-(x - 3) * (x - 3)); },
      [](double x) { return x * x * std::exp(-x); },
      [](double x) { return std::sin(2 * x) * std::exp(-(x - 4) * (x - 4) / 2); },
      [](double x) { return std::pow(x, 3) * std::exp(-x * x / 2); },
  };
  const HalfLineGrid g = HalfLineGrid::uniform(0.02, 20.0, 1000, OriginCell::Linear);
  double plancherel = 0.0, involution = 0.0, fixed_point = 0.0;
  for (double lam : {1.0, 1.5, 2.0, 3.0}) {
    const SpectralCalculus sc(BesselParams(lam), g);
    const auto& wz = sc.frequency().weights();
    const Eigen::Map<const Eigen::VectorXd> Wz(wz.data(), static_cast<Eigen::Index>(wz.size()));
    const Eigen::Map<const Eigen::VectorXd> Wx(g.weights().data(), static_cast<Eigen::Index>(g.size()));
    for (const auto& fn : fs) {
      const Eigen::VectorXd f = SampledFunction1D::sample(g, fn).vec();
      const Eigen::VectorXd F = sc.forward(f);
      plancherel = std::max(plancherel, std::abs(std::sqrt(F.cwiseAbs2().dot(Wz) / f.cwiseAbs2().dot(Wx)) - 1));
      involution = std::max(involution, rel_l2(sc.backward(F), f, g.weights()));
    }
    // y^{nu+1/2} e^{-y^2/2} is its own transform
    const double nu = lam - 0.5;
    const HalfLineGrid gg = HalfLineGrid::uniform(0.02, 12.0, 600, OriginCell::Linear);
    const auto gauss = SampledFunction1D::sample(gg, [nu](double y) { return std::pow(y, nu + 0.5) * std::exp(-y * y / 2); });
    fixed_point = std::max(fixed_point, rel_l2(hankel_transform(BesselParams(lam), gauss, gg).vec(), gauss.vec(), gg.weights()));
  }
  const HalfLineGrid ge = HalfLineGrid::uniform(0.0025, 45.0, 18000, OriginCell::Linear);
  const HalfLineGrid out = HalfLineGrid::uniform(0.1, 5.0, 50);
  const auto h = hankel_transform(BesselParams(1.0), SampledFunction1D::sample(ge, [](double y) { return std::exp(-y); }), out);
  double sine = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    sine = std::max(sine, std::abs(h.values[i] - std::sqrt(2 / kPi) * out[i] / (1 + out[i] * out[i])));
  return {plancherel <= 1e-4 && involution <= 1e-4 && fixed_point <= 1e-4 && sine <= 1e-5,
          "Plancherel " + num(plancherel) + ", involution " + num(involution) + ", Gaussian fixed point " +
              num(fixed_point) + " (1e-4), H_1 e^-y " + num(sine) + " (1e-5)"};
}

Outcome c6() {
  const HalfLineGrid g = HalfLineGrid::uniform(0.02, 40.0, 2000);
  const auto f = SampledFunction1D::sample(g, [](double x) { return std::exp(-(x - 3) * (x - 3)); });
  double iso = 0.0, route = 0.0, rmax = 0.0, settle = 0.0;
  for (double lam : {1.0, 1.5, 2.0, 3.0}) {
    const BesselParams p(lam);
    const auto rk = riesz_apply(p, f, RieszRoute::Kernel);
    const auto rh = riesz_apply(p, f, RieszRoute::Hankel);
    iso = std::max(iso, std::abs(lp_norm(rk, 2.0) / lp_norm(f, 2.0) - 1));
    route = std::max(route, rel_l2(rk.vec(), rh.vec(), g.weights()));
    // rho(s) = (1/pi)/(1 - s) - (lambda/pi) ln|1 - s| + r(s), r bounded: measured by
    // direct quadrature on both sides of the diagonal
    for (int side : {-1, 1}) {
      double prev = 0.0;
      for (double e : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double s = 1 + side * e;
        const double r = RieszKernel::rho_direct(p, s) - 1 / (kPi * (1 - s)) + lam / kPi * std::log(e);
        rmax = std::max(rmax, std::abs(r));
        if (e < 1e-5) settle = std::max(settle, std::abs(r - prev));
        prev = r;
      }
    }
  }
  return {iso <= 1e-3 && route <= 1e-3 && rmax <= 5.0 && settle <= 1e-3,
          "isometry " + num(iso) + ", routes " + num(route) + " (1e-3), near-diagonal remainder max " + num(rmax) +
              " (5), last-decade change " + num(settle) + " (1e-3)"};
}

Outcome c9() {
  Outcome o = from_suite("identityH1");
  // the continuous identity, right side by adaptive quadrature of f itself; the
  // left side's own quadrature error is estimated by halving the spacing
  const std::vector<std::pair<std::string, std::function<double(double)>>> fs = {
      {"gauss3", [](double x) { return std::exp(-(x - 3) * (x - 3)); }},
      {"x2exp", [](double x) { return x * x * std::exp(-x); }},
      {"oscill", [](double x) { return std::sin(3 * x) * std::exp(-(x - 2) * (x - 2)); }},
      {"hat", [](double x) { return std::max(0.0, 1.0 - std::abs(x - 1.5)); }},
      {"signed", [](double x) { return (x - 2) * std::exp(-(x - 2) * (x - 2)); }},
  };
  const double L = 40.0;
  const HalfLineGrid g1 = HalfLineGrid::uniform(0.01, L, 4000, OriginCell::Linear);
  const HalfLineGrid g2 = HalfLineGrid::uniform(0.005, L, 8000, OriginCell::Linear);
  Lcg rng(20240917);
  double worst = 0.0;
  int bad = 0;
  for (const auto& [name, fn] : fs) {
    const auto s1 = SampledFunction1D::sample(g1, fn), s2 = SampledFunction1D::sample(g2, fn);
    const auto o1 = odd_extension(s1), o2 = odd_extension(s2);
    for (int i = 0; i < 50; ++i) {
      const double x = 0.3 + 7.7 * rng.uniform();
      const double lhs1 = hilbert_transform(o1, x) - telyakovskii(s1, x).value;
      const double lhs2 = hilbert_transform(o2, x) - telyakovskii(s2, x).value;
      const auto& f = fn;
      const double i1 = gk([&](double t) { return f(t) * t / (x * x - t * t); }, 0, x / 2);
      const double i2 = gk([&](double t) { return f(t) * t / (x * x - t * t); }, 1.5 * x, L);
      const double i3 = gk([&](double t) { return f(t) / (x + t); }, x / 2, 1.5 * x);
      const double rhs = 2 * i1 + 2 * i2 - i3;
      const double tol = std::max(std::abs(lhs2 - lhs1), 1e-8);
      worst = std::max(worst, std::abs(lhs2 - rhs) / tol);
      if (std::abs(lhs2 - rhs) > 10 * tol) ++bad;
    }
  }
  o.pass = o.pass && bad == 0;
  o.detail += "; continuous identity: max residual / quadrature estimate " + num(worst) + " (10), " +
              std::to_string(bad) + " of 250 over";
  return o;
}

Outcome c13() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = from_suite("atoms");
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = o.pass && sec < 300.0;
  o.detail += "; " + num(sec) + " s (< 300 s)";
  return o;
}

Outcome c16() {
  const BesselParams p(2.0);
  std::vector<std::array<double, 4>> norms;
  std::string detail;
  bool pass = true;
  for (auto [L, n] : {std::pair{8.0, 64}, std::pair{16.0, 128}}) {
    const HalfLineGrid g = HalfLineGrid::uniform(0.125, L, static_cast<std::size_t>(n));
    const auto f = SampledFunction2D::sample(g, g, [](double x, double y) { return x <= 1 && y <= 1 ? 1.0 : 0.0; });
    ProductOperators ops(p, g, g);
    const HardyValues hv = hardy_functionals(ops, f, ConeParams{});
    for (HardyKind k : {HardyKind::Odd, HardyKind::Riesz, HardyKind::Tely}) {
      pass = pass && std::isfinite(hv[k]) && hv[k] > 0;
      detail += std::string(" ") + to_string(k) + "=" + num(hv[k]);
    }
    // the four quadrants of R^2 carry equal |.|-mass, hence the factor 4
    const Eigen::MatrixXd& H = ops.axis(1).hilbert_odd();
    const Eigen::MatrixXd F = f.values;
    const std::array<double, 4> l1 = {4 * lp_norm(F, g, g, 1.0), 4 * lp_norm(H * F, g, g, 1.0),
                                      4 * lp_norm(F * H.transpose(), g, g, 1.0),
                                      4 * lp_norm(H * F * H.transpose(), g, g, 1.0)};
    for (double v : l1) pass = pass && std::isfinite(v);
    norms.push_back(l1);
    detail += " L1(f_o,H1,H2,H1H2)=" + num(l1[0]) + "," + num(l1[1]) + "," + num(l1[2]) + "," + num(l1[3]) +
              " on [0.125," + num(L) + "];";
  }
  double change = 0.0;
  for (int i = 0; i < 4; ++i) change = std::max(change, std::abs(norms[1][i] / norms[0][i] - 1));
  pass = pass && change < 0.10;
  return {pass, detail + " window growth " + num(change) + " (0.10)"};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "heat closed form, lambda=1", c1},
      {2, "Poisson closed form and spectral route, lambda=1", c2},
      {3, "supremum of sqrt(u) e^-u I(u)", c3},
      {4, "semigroup identity", [] { return from_suite("semigroup"); }},
      {5, "Hankel Plancherel and self-reciprocity", c5},
      {6, "Riesz isometry, routes, near diagonal", c6},
      {7, "conjugacy", [] { return from_suite("conjugacy"); }},
      {8, "exact L1 constants", [] { return from_suite("constants"); }},
      {9, "Telyakovskii-Hilbert identity", c9},
      {10, "Cauchy-Riemann residual order", [] { return from_suite("cr"); }},
      {11, "subharmonicity", [] { return from_suite("subharmonic"); }},
      {12, "norm-equivalence dashboard", [] { return from_suite("dashboard"); }},
      {13, "atomic decomposition", c13},
      {14, "Journe inequality", [] { return from_suite("journe"); }},
      {15, "commutator upper bound", [] { return from_suite("commutator"); }},
      {16, "odd extension of the unit square", c16},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(), sec);
    std::fflush(stdout);
    ++ran;
    if (!o.pass) ++failed;
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
