#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "chronon/errors.hpp"
#include "chronon/numerics.hpp"

namespace chronon::numerics {
namespace {

TEST(PairwiseSum, MatchesExactSumOfIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
}

TEST(PairwiseSum, BeatsNaiveAccumulationOnSmallIncrements) {
  std::vector<double> v(1 << 20, 0.1);
  const double exact = 0.1 * static_cast<double>(v.size());
  EXPECT_NEAR(pairwise_sum(v), exact, 1e-9);
}

TEST(Richardson, PolynomialOfDegreeSixIsExactToRounding) {
  auto f = [](double x) { return std::pow(1.3 + x, 6); };
  EXPECT_NEAR(richardson_derivative<double>([&](double h) { return f(h); }, 1e-2), 6 * std::pow(1.3, 5), 1e-9);
}

TEST(Richardson, SweptDerivativePicksConsistentStep) {
  const std::vector<double> steps{1e-2, 1e-3, 1e-4};
  const auto d = swept_derivative([](double h) { return std::sin(0.7 + h); }, steps);
  EXPECT_NEAR(d.value, std::cos(0.7), 1e-11);
  EXPECT_LT(d.consistency, 1e-9);
}

TEST(Bisect, FindsRootAndRejectsBadBracket) {
  EXPECT_NEAR(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14), std::sqrt(2.0), 1e-14);
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0, 1e-12), DomainError);
}

TEST(GoldenSection, LocatesSineMaximum) {
  const auto e = golden_section_max([](double x) { return std::sin(x); }, 0.0, 3.0, 1e-12);
  EXPECT_NEAR(e.x, M_PI / 2, 1e-7);  // flat top: location only to sqrt(eps)
  EXPECT_NEAR(e.value, 1.0, 1e-15);
}

TEST(FitLine, RecoversExactLine) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{1, 3, 5, 7, 9};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-14);
}

TEST(FitOrder, QuadraticResidual) {
  std::vector<double> h;
  std::vector<double> r;
  for (double s = 0.1; s > 1e-3; s /= 2) {
    h.push_back(s);
    r.push_back(3.0 * s * s);
  }
  EXPECT_NEAR(fit_order(h, r), 2.0, 1e-12);
}

}  // namespace
}  // namespace chronon::numerics
