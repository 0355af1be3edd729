#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ncg/quadrature.hpp"
#include "ncg/residue.hpp"

using namespace ncg;

namespace {
constexpr double kPi = std::numbers::pi;

MultiIndex idx(std::initializer_list<int> e) {
  MultiIndex a{};
  int k = 0;
  for (int x : e) a[k++] = static_cast<std::uint8_t>(x);
  return a;
}
}  // namespace

TEST(Sphere, Volumes) {
  EXPECT_NEAR(sphere_volume(2), 2 * kPi, 1e-13);
  EXPECT_NEAR(sphere_volume(3), 4 * kPi, 1e-13);
  EXPECT_NEAR(sphere_volume(4), 2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(sphere_volume(6), kPi * kPi * kPi, 1e-12);
}

TEST(Sphere, SecondAndFourthMoments) {
  for (int n : {2, 3, 4, 6}) {
    const double vol = sphere_volume(n);
    EXPECT_NEAR(sphere_monomial_integral(n, idx({2})), vol / n, 1e-12);
    EXPECT_NEAR(sphere_monomial_integral(n, idx({4})), 3 * vol / (n * (n + 2)), 1e-12);
    EXPECT_NEAR(sphere_monomial_integral(n, idx({2, 2})), vol / (n * (n + 2)), 1e-12);
    EXPECT_DOUBLE_EQ(sphere_monomial_integral(n, idx({1})), 0.0);
    EXPECT_DOUBLE_EQ(sphere_monomial_integral(n, idx({2, 1})), 0.0);
  }
}

TEST(Sphere, ExactRatios) {
  EXPECT_EQ(sphere_monomial_ratio(4, idx({2})), Rational(1, 4));
  EXPECT_EQ(sphere_monomial_ratio(4, idx({2, 2})), Rational(1, 24));
  EXPECT_EQ(sphere_monomial_ratio(3, idx({4})), Rational(1, 5));
  EXPECT_EQ(sphere_monomial_ratio(3, idx({3})), Rational(0));
  EXPECT_EQ(sphere_monomial_ratio(5, idx({})), Rational(1));
}

TEST(MonteCarlo, AgreesWithClosedFormWithinFourSigma) {
  for (int n : {2, 4}) {
    const auto est = mc_sphere_oracle(
        n, [](std::span<const double> x) { return x[0] * x[0] * x[1] * x[1] + x[0]; }, 200000, 7);
    const double exact = sphere_monomial_integral(n, idx({2, 2}));
    EXPECT_GT(est.standard_error, 0.0);
    EXPECT_LT(std::abs(est.estimate - exact), 4 * est.standard_error) << "n=" << n;
  }
}

TEST(MonteCarlo, DeterministicForSeed) {
  auto f = [](std::span<const double> x) { return Complex(x[0] * x[0], x[1]); };
  const auto a = mc_sphere_oracle(4, f, 20000, 3);
  const auto b = mc_sphere_oracle(4, f, 20000, 3);
  const auto c = mc_sphere_oracle(4, f, 20000, 4);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_NE(a.estimate, c.estimate);
  EXPECT_EQ(a.samples, 20000u);
}

TEST(MonteCarlo, MatrixValuedIntegrand) {
  const auto rep = build_rep(4);
  const auto est = mc_sphere_oracle(
      4,
      [&](std::span<const double> x) {
        const SquareMatrix c = clifford_vector(rep, x);
        return c * c;
      },
      10000, 1);
  // c(x)^2 = -|x|^2 Id is constant on the sphere
  EXPECT_LT(max_abs_diff(est.estimate, SquareMatrix::identity(4) * Complex(-sphere_volume(4))), 1e-9);
}

TEST(MonteCarlo, RejectsTooFewSamples) {
  EXPECT_THROW(mc_sphere_oracle(2, [](std::span<const double>) { return 1.0; }, 9999, 1), std::invalid_argument);
}

TEST(RealLine, RationalIntegrands) {
  EXPECT_NEAR(std::abs(real_line_integral([](double x) { return Complex(1.0 / (1 + x * x)); }) - kPi), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(real_line_integral([](double x) { return Complex(x * x / std::pow(1 + x * x, 2)); }) - kPi / 2),
              0.0, 1e-9);
  // 1/(x - i)^2 / (x + i) integrates to 2 pi i Res_{+i} = 2 pi i * (-1/(2i)^2)
  const Complex expect = 2.0 * kPi * kI * (-1.0 / std::pow(2.0 * kI, 2));
  const Complex got = real_line_integral([](double x) { return 1.0 / (std::pow(Complex(x, -1), 2) * Complex(x, 1)); });
  EXPECT_LT(std::abs(got - expect), 1e-8);
}

TEST(Torus, TrapezoidExactForTrigonometricPolynomials) {
  const double v = torus_integrate([](std::span<const double> x) { return 1.0 + std::cos(x[0]) * std::sin(2 * x[1]); }, 2, 16);
  EXPECT_NEAR(v, 4 * kPi * kPi, 1e-10);
  EXPECT_THROW(torus_integrate([](std::span<const double>) { return 1.0; }, 2, 8), std::invalid_argument);
}

// global divergence: the interior density integrates to zero over a closed torus
TEST(Torus, InteriorDensityIntegratesToZero) {
  for (int n : {2, 4}) {
    const auto rep = build_rep(n);
    const LinearDensity density = plain_density_functional(rep);
    // f = sin x1 + cos 2 x2
    auto local = [&](std::span<const double> x) {
      std::vector<double> f1(n, 0.0);
      Eigen::MatrixXd f2 = Eigen::MatrixXd::Zero(n, n);
      f1[0] = std::cos(x[0]);
      f1[1] = -2 * std::sin(2 * x[1]);
      f2(0, 0) = -std::sin(x[0]);
      f2(1, 1) = -4 * std::cos(2 * x[1]);
      return density(f1, f2);
    };
    const double re = torus_integrate([&](std::span<const double> x) { return local(x).real(); }, n, 16);
    const double im = torus_integrate([&](std::span<const double> x) { return local(x).imag(); }, n, 16);
    EXPECT_LT(std::abs(re), 1e-9) << "n=" << n;
    EXPECT_LT(std::abs(im), 1e-9) << "n=" << n;
    // the density itself is not identically zero
    const std::vector<double> probe{0.3, 0.9, 0.1, 0.2};
    EXPECT_GT(std::abs(local(std::span<const double>(probe.data(), n))), 0.1);
  }
}
