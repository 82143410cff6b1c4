// bhardy: command-line front end for the besselhardy library.

#include "besselhardy/commutator.hpp"
#include "besselhardy/csv_io.hpp"
#include "besselhardy/dyadic.hpp"
#include "besselhardy/families.hpp"
#include "besselhardy/singular.hpp"
#include "besselhardy/suites.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace bh;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Globals {
  std::map<std::string, std::string> flags;  // config key -> value, only those given
  std::string config;
};

RunConfig make_config(const Globals& g) {
  RunConfig c = g.config.empty() ? RunConfig{} : RunConfig::from_file(g.config);
  for (const auto& [k, v] : g.flags) c.set(k, v);
  c.validate();
  return c;
}

void warn_regime(double lambda) {
  if (BesselParams(lambda).regime_warning())
    std::cerr << "warning: lambda = " << lambda
              << " is outside lambda > 1, where the Hardy space estimates are stated\n";
}

void warn_regime(const RunConfig& c, double fallback) { warn_regime(c.lambda.value_or(fallback)); }

int emit(const VerificationReport& r, const RunConfig& c) {
  if (c.out.empty())
    std::cout << r.to_csv();
  else
    r.write(c.out);
  return r.all_pass() ? 0 : kExitFail;
}

SampledFunction2D testcase(const std::string& name, const RunConfig& c) {
  if (name.rfind("file:", 0) == 0) return io::read_function_2d(name.substr(5));
  const HalfLineGrid g = c.grid(0.25, 12.0, 48);
  if (name == "bump")
    return SampledFunction2D::sample(g, g, [](double x, double y) {
      return x * x * y * y * std::exp(-(x - 3) * (x - 3) - (y - 3) * (y - 3));
    });
  if (name == "indicator")
    return SampledFunction2D::sample(g, g, [](double x, double y) { return x <= 1.0 && y <= 1.0 ? 1.0 : 0.0; });
  if (name == "oscillatory")
    return SampledFunction2D::sample(g, g, [](double x, double y) {
      return std::sin(3 * x) * std::sin(3 * y) * std::exp(-((x - 3) * (x - 3) + (y - 3) * (y - 3)) / 2);
    });
  throw CLI::ValidationError("--testcase", "expected bump, indicator, oscillatory or file:<path>");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw std::runtime_error("cannot write " + path);
  o << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bessel operator Hardy space toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals glob;
  auto global = [&](const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(flag, [&glob, key](const std::string& v) { glob.flags[key] = v; }, help);
  };
  global("--lambda", "lambda", "order lambda > 0");
  global("--grid-min", "grid-min", "first grid node");
  global("--grid-max", "grid-max", "last grid node");
  global("--grid-n", "grid-n", "number of grid nodes");
  global("--grid-kind", "grid-kind", "uniform or log");
  global("--t-min", "t-min", "smallest scale of the cone lattice");
  global("--t-max", "t-max", "largest scale of the cone lattice");
  global("--scales-per-octave", "scales-per-octave", "cone lattice density");
  global("--tol", "tol", "quadrature tolerance");
  global("--seed", "seed", "LCG seed for random dyadic sets");
  global("--out", "out", "output path");
  app.add_option("--config", glob.config, "key=value file; flags override it")->check(CLI::ExistingFile);

  std::function<int()> action;

  // kernel
  auto* kernel = app.add_subcommand("kernel", "kernels and their checks");
  kernel->require_subcommand(1);
  std::string kind = "heat";
  double t = 1.0, x = 1.0, y = 1.0;
  auto* keval = kernel->add_subcommand("eval", "evaluate one kernel value");
  keval->add_option("--kind", kind)->check(CLI::IsMember({"heat", "poisson", "conjugate", "qderiv"}));
  keval->add_option("--t", t)->required();
  keval->add_option("--x", x)->required();
  keval->add_option("--y", y)->required();
  keval->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      const BesselParams p(c.lambda.value_or(1.0));
      warn_regime(p.lambda);
      const KernelConfig kc = c.kernel_config();
      double v = 0.0;
      if (kind == "heat") v = heat_kernel(p, t, x, y);
      else if (kind == "poisson") v = poisson_kernel_subordination(p, kc, t, x, y);
      else if (kind == "conjugate") v = conj_poisson_kernel(p, kc, t, x, y);
      else v = q_deriv_kernel(p, t, x, y, kc.tol);
      std::cout << io::format_double(v) << '\n';
      return 0;
    };
  });
  std::string suite;
  auto* kverify = kernel->add_subcommand("verify", "run a kernel suite");
  kverify->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"gaussian", "poisson-bound", "semigroup", "subordination", "claimc", "conjugacy", "moser"}));
  kverify->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      if (c.lambda) warn_regime(*c.lambda);
      return emit(run_suite(suite, c), c);
    };
  });

  // transform
  auto* transform = app.add_subcommand("transform", "one dimensional singular transforms");
  transform->require_subcommand(1);
  std::string op, input, which;
  auto* tapply = transform->add_subcommand("apply", "apply a transform to a 1D function CSV");
  tapply->add_option("--op", op)->required()->check(CLI::IsMember({"hilbert", "telyakovskii", "riesz"}));
  tapply->add_option("--input", input)->required();
  tapply->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      const SampledFunction1D f = io::read_function_1d(input);
      SampledFunction1D out;
      if (op == "hilbert") {
        const Eigen::VectorXd v = hilbert_odd_matrix(f.grid) * f.vec();
        out = SampledFunction1D(f.grid, std::vector<double>(v.data(), v.data() + v.size()));
      } else if (op == "telyakovskii") {
        std::vector<bool> clipped;
        const Eigen::VectorXd v = telyakovskii_matrix(f.grid, &clipped) * f.vec();
        out = SampledFunction1D(f.grid, std::vector<double>(v.data(), v.data() + v.size()));
        const auto n = std::count(clipped.begin(), clipped.end(), true);
        if (n) std::cerr << "note: " << n << " points have windows clipped to the grid\n";
      } else {
        const BesselParams p(c.lambda.value_or(2.0));
        warn_regime(p.lambda);
        out = riesz_apply(p, f, RieszRoute::Kernel, c.kernel_config());
      }
      if (c.out.empty()) {
        std::cout << "x,value\n";
        for (std::size_t i = 0; i < out.values.size(); ++i)
          std::cout << io::format_double(out.grid[i]) << ',' << io::format_double(out.values[i]) << '\n';
      } else {
        io::write_function(c.out, out);
      }
      return 0;
    };
  });
  auto* tconst = transform->add_subcommand("constants", "L1 ratio of a comparison operator");
  tconst->add_option("--which", which)->required()->check(CLI::IsMember({"I1", "I2", "I3", "J1", "J2", "J3"}));
  tconst->add_option("--input", input)->required();
  tconst->callback([&] {
    action = [&] {
      make_config(glob);
      const Comparison w = parse_comparison(which);
      const auto f = io::read_function(input);
      double r = 0.0;
      if (const auto* f1 = std::get_if<SampledFunction1D>(&f)) {
        if (w == Comparison::J1 || w == Comparison::J2 || w == Comparison::J3)
          throw std::invalid_argument("J1..J3 act on the second variable; pass a 2D function");
        r = comparison_l1_ratio(*f1, w);
      } else {
        r = comparison_l1_ratio(std::get<SampledFunction2D>(f), w);
      }
      std::cout << io::format_double(r) << '\n';
      return 0;
    };
  });

  // norms
  auto* norms = app.add_subcommand("norms", "Hardy space functionals");
  norms->require_subcommand(1);
  std::string tc = "bump";
  auto* ncompare = norms->add_subcommand("compare", "the ten L1 functionals of one function");
  ncompare->add_option("--testcase", tc, "bump, indicator, oscillatory or file:<path>");
  ncompare->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      const BesselParams p(c.lambda.value_or(2.0));
      warn_regime(p.lambda);
      const SampledFunction2D f = testcase(tc, c);
      const DashboardTable table = dashboard_table(p, {tc.rfind("file:", 0) == 0 ? "file" : tc}, {f}, c.cone());
      const std::string csv = dashboard_csv(table);
      if (c.out.empty()) std::cout << csv;
      else write_text(c.out, csv);
      if (table.values[0].clipped) std::cerr << "note: some Telyakovskii windows were clipped to the grid\n";
      return 0;
    };
  });

  // atoms
  auto* atoms = app.add_subcommand("atoms", "atomic decomposition");
  atoms->require_subcommand(1);
  int depth = 6;
  auto* adecomp = atoms->add_subcommand("decompose", "decompose a 2D function into atoms");
  adecomp->add_option("--input", input)->required();
  adecomp->add_option("--depth", depth)->check(CLI::Range(0, 12));
  adecomp->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      const BesselParams p(c.lambda.value_or(2.0));
      warn_regime(p.lambda);
      const SampledFunction2D f = io::read_function_2d(input);
      AtomicOptions o;
      o.depth = depth;
      const AtomicDecomposition d = atomic_decompose(p, f, o, c.kernel_config());
      const fs::path dir = c.out.empty() ? fs::path("atoms") : fs::path(c.out);
      fs::create_directories(dir);
      std::ostringstream coeff;
      coeff << "ell,lambda_ell\n";
      for (const Atom& a : d.atoms) {
        io::write_function((dir / ("atom_" + std::to_string(a.ell) + ".csv")).string(), a.atom);
        coeff << a.ell << ',' << io::format_double(a.coefficient) << '\n';
      }
      write_text((dir / "coefficients.csv").string(), coeff.str());
      const double err = lp_norm(SampledFunction2D(f.grid1, f.grid2, d.reconstruction().values - f.values), 2.0) /
                         lp_norm(f, 2.0);
      std::cout << "atoms " << d.atoms.size() << ", sum |lambda| " << io::format_double(d.coefficient_sum(), 8)
                << ", relative L2 reconstruction error " << io::format_double(err, 4) << '\n';
      return 0;
    };
  });

  // dyadic
  auto* dyadic = app.add_subcommand("dyadic", "dyadic rectangles");
  dyadic->require_subcommand(1);
  int samples = 100, ddepth = 6;
  double delta = 1.0;
  auto* djourne = dyadic->add_subcommand("journe", "Journe inequality on random open sets");
  djourne->add_option("--samples", samples)->check(CLI::PositiveNumber);
  djourne->add_option("--delta", delta)->check(CLI::PositiveNumber);
  djourne->add_option("--depth", ddepth)->check(CLI::Range(0, 12));
  djourne->callback([&] {
    action = [&] {
      RunConfig c = make_config(glob);
      c.samples = samples;
      c.delta = delta;
      c.depth = ddepth;
      return emit(suite_journe(c), c);
    };
  });
  int bdepth = 5;
  auto* dbmo = dyadic->add_subcommand("bmo", "discrete BMO norm of a 2D symbol");
  dbmo->add_option("--input", input)->required();
  dbmo->add_option("--depth", bdepth)->check(CLI::Range(0, 12));
  dbmo->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      const BesselParams p(c.lambda.value_or(2.0));
      warn_regime(p.lambda);
      BmoOptions o;
      o.depth = bdepth;
      std::cout << io::format_double(bmo_norm(p, io::read_function_2d(input), o, c.kernel_config())) << '\n';
      return 0;
    };
  });

  // commutator
  auto* comm = app.add_subcommand("commutator", "iterated Riesz commutators");
  comm->require_subcommand(1);
  std::string bpath, fpath, family = "default";
  auto* crun = comm->add_subcommand("run", "[[b, R1], R2] f for one pair");
  crun->add_option("--b", bpath)->required();
  crun->add_option("--f", fpath)->required();
  crun->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      const BesselParams p(c.lambda.value_or(2.0));
      warn_regime(p.lambda);
      const CommutatorResult r =
          iterated_commutator(p, io::read_function_2d(bpath), io::read_function_2d(fpath), c.kernel_config());
      if (!c.out.empty()) io::write_function(c.out, r.output);
      std::cout << "bmo " << io::format_double(r.bmo, 8) << ", ratio " << io::format_double(r.operator_ratio, 8)
                << '\n';
      return std::isfinite(r.operator_ratio) ? 0 : kExitFail;
    };
  });
  auto* csweep = comm->add_subcommand("sweep", "ratios over a symbol and function family");
  csweep->add_option("--family", family)->check(CLI::IsMember({"default"}));
  csweep->callback([&] {
    action = [&] {
      const RunConfig c = make_config(glob);
      const BesselParams p(c.lambda.value_or(2.0));
      warn_regime(p.lambda);
      const HalfLineGrid g = c.grid(0.25, 8.0, 32);
      return emit(commutator_sweep(p, symbol_family(), dashboard_family(), g, {}, c.kernel_config()), c);
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  int vdepth = -1;
  verify->add_option("--suite", suite, "suite name, or 'list'")->required();
  verify->add_option("--input", input, "function CSV for the dashboard suite");
  verify->add_option("--depth", vdepth);
  verify->callback([&] {
    action = [&] {
      if (suite == "list") {
        for (const auto& n : suite_names()) std::cout << n << '\n';
        return 0;
      }
      RunConfig c = make_config(glob);
      if (!input.empty()) c.input = input;
      if (vdepth >= 0) c.depth = vdepth;
      if (c.lambda) warn_regime(*c.lambda);
      return emit(run_suite(suite, c), c);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  try {
    return action ? action() : 0;
  } catch (const io::CsvError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const UnknownSuite& e) {
    std::cerr << "error: " << e.what() << "; known suites:";
    for (const auto& n : suite_names()) std::cerr << ' ' << n;
    std::cerr << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitError;
}
