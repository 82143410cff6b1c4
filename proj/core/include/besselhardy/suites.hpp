#ifndef BESSELHARDY_SUITES_HPP
#define BESSELHARDY_SUITES_HPP

#include "besselhardy/grids.hpp"
#include "besselhardy/kernels.hpp"
#include "besselhardy/product_ops.hpp"
#include "besselhardy/report.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bh {

// Settings shared by the CLI and the suites. Unset optionals mean "the
// suite's own default"; a set lambda restricts suites that sweep several.
struct RunConfig {
  std::optional<double> lambda;
  std::optional<double> grid_min, grid_max;
  std::optional<int> grid_n;
  std::optional<GridKind> grid_kind;
  std::optional<double> t_min, t_max;
  std::optional<int> scales_per_octave;
  std::optional<double> tol;
  std::uint64_t seed = 20240917;
  std::optional<int> depth;
  int samples = 100;
  double delta = 1.0;
  std::string input;  // function CSV for suites that take one
  std::string out;

  // key=value; keys use '-' or '_' interchangeably. Throws ConfigError.
  void set(const std::string& key, const std::string& value);
  // Lines "key = value"; '#' starts a comment.
  static RunConfig from_file(const std::string& path);
  void validate() const;

  std::vector<double> lambdas(std::vector<double> defaults) const;
  HalfLineGrid grid(double min, double max, int n, GridKind kind = GridKind::Uniform) const;
  ConeParams cone(const ConeParams& defaults = {}) const;
  KernelConfig kernel_config() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& suite_names();
VerificationReport run_suite(const std::string& name, const RunConfig& cfg = {});

// Individual suites.
VerificationReport suite_specfun(const RunConfig& cfg);
VerificationReport suite_gaussian(const RunConfig& cfg);
VerificationReport suite_poisson_bound(const RunConfig& cfg);
VerificationReport suite_semigroup(const RunConfig& cfg);
VerificationReport suite_subordination(const RunConfig& cfg);
VerificationReport suite_claimc(const RunConfig& cfg);
VerificationReport suite_conjugacy(const RunConfig& cfg);
VerificationReport suite_moser(const RunConfig& cfg);
VerificationReport suite_cr(const RunConfig& cfg);
VerificationReport suite_subharmonic(const RunConfig& cfg);
VerificationReport suite_merryfield(const RunConfig& cfg);
VerificationReport suite_constants(const RunConfig& cfg);
VerificationReport suite_identity_h1(const RunConfig& cfg);
VerificationReport suite_dashboard(const RunConfig& cfg);
VerificationReport suite_journe(const RunConfig& cfg);
VerificationReport suite_atoms(const RunConfig& cfg);
VerificationReport suite_bmo(const RunConfig& cfg);
VerificationReport suite_commutator(const RunConfig& cfg);

// Pieces reused by the CLI.

// Sup of sqrt(u) e^{-u} I_{lambda-1/2}(u) over a log sweep of u.
double claim_c_sup(const BesselParams& p, double u_lo = 1e-6, double u_hi = 1e6, int samples = 10000);

// int_0^inf W_t(x, z) W_s(z, y) dz by adaptive Gauss-Kronrod.
double semigroup_integral(const BesselParams& p, double t, double s, double x, double y);

// sup |u(t0, x0)| / (r^{-2} int_B |u|^q)^{1/q}, u = P_t f, B the disc of radius
// r = t0 / 2 about (t0, x0), over a lattice of centres.
double moser_constant(const BesselParams& p, const SampledFunction1D& f, double q,
                      const std::vector<double>& t0s, const std::vector<double>& x0s);

// The ten functionals for each function of a family, one row per (function, kind).
struct DashboardTable {
  std::vector<std::string> functions;
  std::vector<HardyValues> values;
};
DashboardTable dashboard_table(const BesselParams& p, const std::vector<std::string>& names,
                               const std::vector<SampledFunction2D>& fs, const ConeParams& cone);
// max over functions and kind pairs of max(r, 1/r), r = value_a / value_b
double dashboard_band(const DashboardTable& t);
// max over functions and kind pairs of the relative change of value_a / value_b
double dashboard_ratio_change(const DashboardTable& a, const DashboardTable& b);
// max over functions and kinds of the relative change of the values
double dashboard_value_change(const DashboardTable& a, const DashboardTable& b);
// function,kind,value
std::string dashboard_csv(const DashboardTable& t);

}  // namespace bh

#endif
