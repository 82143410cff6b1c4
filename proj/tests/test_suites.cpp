#include "besselhardy/csv_io.hpp"
#include "besselhardy/dyadic.hpp"
#include "besselhardy/suites.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace bh;

namespace {

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bh_suites_" + name)).string();
}

}  // namespace

TEST(RunConfig, SetAndValidate) {
  RunConfig c;
  c.set("grid-n", "64");
  c.set("grid_max", "9.5");
  c.set("grid-kind", "log");
  c.set("lambda", "1.5");
  c.set("seed", "7");
  EXPECT_EQ(c.grid_n, 64);
  EXPECT_EQ(c.grid_max, 9.5);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.lambdas({1.0, 2.0}), std::vector<double>{1.5});
  const HalfLineGrid g = c.grid(0.1, 4.0, 16);
  EXPECT_EQ(g.size(), 64u);
  EXPECT_EQ(g.kind(), GridKind::Logarithmic);
  EXPECT_DOUBLE_EQ(g.max(), 9.5);
  EXPECT_THROW(c.set("colour", "red"), ConfigError);
  EXPECT_THROW(c.set("grid-n", "sixty"), ConfigError);
  c.set("tol", "-1");
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(RunConfig, FromFile) {
  std::ofstream(tmp("ok.cfg")) << "# desk run\nlambda = 2\n\ngrid_n=32  # inline\nt-min = 0.125\n";
  const RunConfig c = RunConfig::from_file(tmp("ok.cfg"));
  EXPECT_EQ(c.lambda, 2.0);
  EXPECT_EQ(c.grid_n, 32);
  EXPECT_DOUBLE_EQ(c.cone().t_min, 0.125);
  std::ofstream(tmp("bad.cfg")) << "lambda = 2\nnonsense\n";
  try {
    RunConfig::from_file(tmp("bad.cfg"));
    FAIL() << "expected an error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(Suites, NamesAndUnknown) {
  EXPECT_EQ(suite_names().size(), 18u);
  EXPECT_THROW(run_suite("no-such-suite"), UnknownSuite);
}

TEST(Suites, SpecfunPasses) {
  const VerificationReport r = run_suite("specfun");
  EXPECT_FALSE(r.empty());
  EXPECT_TRUE(r.all_pass()) << r.to_csv();
}

TEST(Suites, DashboardOfZeroInput) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.5, 8.0, 16);
  io::write_function(tmp("zero.csv"), SampledFunction2D::sample(g, g, [](double, double) { return 0.0; }));
  RunConfig c;
  c.input = tmp("zero.csv");
  c.t_min = 0.25;
  c.t_max = 4.0;
  c.scales_per_octave = 2;
  const VerificationReport r = run_suite("dashboard", c);
  EXPECT_TRUE(r.all_pass());
  int functionals = 0;
  for (const auto& row : r.rows())
    if (row.check == "functional") {
      EXPECT_EQ(row.value, 0.0) << row.parameter;
      ++functionals;
    }
  EXPECT_EQ(functionals, 10);
}

TEST(Suites, DeterministicReports) {
  RunConfig c;
  c.samples = 20;
  c.depth = 4;
  const std::string a = run_suite("journe", c).to_csv(), b = run_suite("journe", c).to_csv();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "check,parameter,value,bound,pass");
  Lcg x(c.seed), y(1);
  EXPECT_NE(random_open_set(x, 6).rectangles(), random_open_set(y, 6).rectangles());
}

TEST(Suites, FrozenRegressionValues) {
  RunConfig c;
  c.samples = 20;
  c.depth = 4;
  const VerificationReport r = run_suite("journe", c);
  ASSERT_EQ(r.rows().size(), 1u);
  // sums of dyadic areas against powers of two: exact in binary
  EXPECT_EQ(r.rows()[0].value, 31.0 / 16.0);
  EXPECT_EQ(*r.rows()[0].bound, 8.0);
}
