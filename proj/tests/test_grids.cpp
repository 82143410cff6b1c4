#include "besselhardy/csv_io.hpp"
#include "besselhardy/grids.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace bh;

namespace {

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bh_grids_" + name)).string();
}

void write_text(const std::string& path, const std::string& s) { std::ofstream(path) << s; }

}  // namespace

TEST(Quadrature, Examples) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.5, 4.0, 8);
  EXPECT_EQ(quadrature(SampledFunction1D::sample(g, [](double) { return 0.0; })), 0.0);
  const auto hat = SampledFunction1D::sample(g, [](double x) { return std::max(0.0, 1.0 - std::abs(x - 2.0)); });
  EXPECT_NEAR(quadrature(hat), 1.0, 1e-14);
  const HalfLineGrid e = HalfLineGrid::uniform(1e-3, 30.0, 4096);
  EXPECT_NEAR(quadrature(SampledFunction1D::sample(e, [](double x) { return std::exp(-x); })), 1.0, 1e-5);
}

TEST(Quadrature, LogGridExactForLinear) {
  const HalfLineGrid g = HalfLineGrid::logarithmic(1.0, 4.0, 20);
  EXPECT_EQ(g.kind(), GridKind::Logarithmic);
  const auto f = SampledFunction1D::sample(g, [](double x) { return 3 * x - 1; });
  // trapezoid is exact on [1, 4]; the constant origin cell adds f(1) * 1
  EXPECT_NEAR(quadrature(f), (1.5 * 16 - 4) - (1.5 - 1) + 2.0, 1e-12);
}

TEST(LpNorm, Examples) {
  const HalfLineGrid g = HalfLineGrid::uniform(1e-3, 3.0, 3000);
  const auto ind = SampledFunction1D::sample(g, [](double x) { return x >= 1.0 && x <= 2.0 ? 1.0 : 0.0; });
  EXPECT_NEAR(lp_norm(ind, 1.0), 1.0, 2e-3);
  const HalfLineGrid h = HalfLineGrid::uniform(0.01, 10.0, 1000);
  const auto gauss = SampledFunction1D::sample(h, [](double x) { return std::exp(-(x - 5) * (x - 5)); });
  // int e^{-2 (x-5)^2} dx = sqrt(pi / 2)
  EXPECT_NEAR(lp_norm(gauss, 2.0), std::pow(std::numbers::pi / 2, 0.25), 1e-4);
  const auto g2 = SampledFunction2D::sample(h, h, [](double x, double y) {
    return std::exp(-(x - 5) * (x - 5) - (y - 4) * (y - 4));
  });
  EXPECT_NEAR(lp_norm(g2, 2.0), std::sqrt(std::numbers::pi / 2), 1e-4);
  EXPECT_EQ(lp_norm(g2.with_values(g2.values * 0.0), 1.0), 0.0);
}

TEST(OddExtension, SignTable) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.25, 2.0, 8);
  const auto f = SampledFunction2D::sample(g, g, [](double x, double y) { return x <= 1 && y <= 1 ? 1.0 : 0.0; });
  const MirroredFunction2D o = odd_extension(f);
  EXPECT_EQ(o(0.5, 0.5), 1.0);
  EXPECT_EQ(o(-0.5, 0.5), -1.0);
  EXPECT_EQ(o(-0.5, -0.5), 1.0);
  EXPECT_EQ(o(0.5, -0.5), -1.0);
  for (double x : {-1.75, -0.6, 0.3, 1.1})
    for (double y : {-1.2, -0.25, 0.9}) {
      EXPECT_EQ(o(-x, y), -o(x, y));
      EXPECT_EQ(o(x, -y), -o(x, y));
    }
  EXPECT_TRUE(o.restrict_first_quadrant().values.isApprox(f.values));
}

TEST(OddExtension, ProductIsGlobal) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.1, 1.0, 10, OriginCell::Linear);
  const auto f = SampledFunction2D::sample(g, g, [](double x, double y) { return x * y; });
  const MirroredFunction2D o = odd_extension(f);
  for (double x : {-0.95, -0.35, -0.05, 0.05, 0.45})
    for (double y : {-0.7, -0.02, 0.33}) EXPECT_NEAR(o(x, y), x * y, 1e-14);
}

TEST(MirroredFunction1D, EvenOfIndicator) {
  const HalfLineGrid g = HalfLineGrid::uniform(0.1, 2.0, 20);
  const auto f = SampledFunction1D::sample(g, [](double x) { return x <= 1.0 ? 1.0 : 0.0; });
  const MirroredFunction1D e = even_extension(f);
  EXPECT_EQ(e(-0.55), 1.0);
  EXPECT_EQ(e(0.55), 1.0);
  EXPECT_EQ(e(-1.5), 0.0);
  EXPECT_EQ(odd_extension(f)(-0.55), -1.0);
}

TEST(CsvIo, RoundTripIsBitExact) {
  const HalfLineGrid g = HalfLineGrid::logarithmic(0.013, 7.7, 33);
  const auto f = SampledFunction1D::sample(g, [](double x) { return std::sin(x) / 3.0 + 1e-300 * x; });
  io::write_function(tmp("rt1.csv"), f);
  const auto back = io::read_function_1d(tmp("rt1.csv"));
  EXPECT_EQ(back.values, f.values);
  EXPECT_EQ(back.grid.points(), g.points());

  const auto f2 = SampledFunction2D::sample(g, HalfLineGrid::uniform(0.5, 2, 4),
                                            [](double x, double y) { return std::exp(-x * y) / 7; });
  io::write_function(tmp("rt2.csv"), f2);
  const auto b2 = io::read_function_2d(tmp("rt2.csv"));
  EXPECT_EQ(b2.values, f2.values);
  EXPECT_TRUE(std::holds_alternative<SampledFunction2D>(io::read_function(tmp("rt2.csv"))));
}

TEST(CsvIo, Errors) {
  write_text(tmp("nohead.csv"), "1,2\n2,3\n");
  EXPECT_THROW(io::read_function_1d(tmp("nohead.csv")), io::CsvError);
  write_text(tmp("shuffled.csv"), "x,value\n1,1\n3,2\n2,3\n");
  try {
    io::read_function_1d(tmp("shuffled.csv"));
    FAIL() << "expected an error";
  } catch (const io::CsvError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_NE(std::string(e.what()).find("non-monotone"), std::string::npos);
  }
  write_text(tmp("nan.csv"), "x,value\n1,1\n2,nan\n");
  EXPECT_THROW(io::read_function_1d(tmp("nan.csv")), io::CsvError);
  EXPECT_THROW(io::read_function_1d(tmp("does_not_exist.csv")), std::runtime_error);
}

TEST(Grid, Validation) {
  EXPECT_THROW(HalfLineGrid::uniform(1.0, 0.5, 4), std::invalid_argument);
  EXPECT_THROW(HalfLineGrid::from_points({1.0, 0.5}), std::invalid_argument);
  const HalfLineGrid g = HalfLineGrid::from_points({0.5, 1.0, 1.5, 2.0});
  EXPECT_EQ(g.kind(), GridKind::Uniform);
  EXPECT_EQ(g.locate(1.2), 1u);
  EXPECT_EQ(g.locate(100.0), 2u);
}
