#include <gtest/gtest.h>

#include <random>

#include "ncg/operators.hpp"
#include "ncg/trace_identities.hpp"

using namespace ncg;

namespace {

std::vector<double> random_vec(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> r(n);
  for (auto& c : r) c = unif(rng);
  return r;
}

AntisymTensor3 random_t(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  AntisymTensor3 t(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) t.set(a, b, c, unif(rng));
  return t;
}

std::vector<PerturbationSpec> all_perturbations(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return {NoPerturbation{}, GradingPerturbation{}, VectorGrading{random_vec(n, rng)}, TorsionGrading{random_t(n, rng)},
          TorsionVector{random_t(n, rng), random_vec(n, rng)}};
}

double symbol_diff(const Symbol& a, const Symbol& b, int lowest) {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int k = 0; k < 6; ++k) {
    const auto xi = random_vec(a.dim(), rng);
    for (int d = std::max(a.order(), b.order()); d >= lowest; --d)
      worst = std::max(worst, max_abs_diff(a.evaluate(d, xi), b.evaluate(d, xi)));
  }
  return worst;
}

}  // namespace

class PerturbedOperators : public ::testing::TestWithParam<int> {};

TEST_P(PerturbedOperators, DiracSquaredIsLaplacian) {
  const int n = GetParam();
  const auto rep = build_rep(n);
  for (const auto& p : all_perturbations(n, 3)) {
    const Symbol d = dirac_symbol(rep, p);
    EXPECT_LT(symbol_diff(compose(d, d, 0), laplacian_symbol(rep, p), 0), 1e-12) << perturbation_kind(p);
  }
}

TEST_P(PerturbedOperators, FirstOrderTermIsAnticommutator) {
  const int n = GetParam();
  const auto rep = build_rep(n);
  std::mt19937_64 rng(5);
  for (const auto& p : all_perturbations(n, 8)) {
    const SquareMatrix phi = perturbation_matrix(rep, p);
    const Symbol lap = laplacian_symbol(rep, p);
    const auto xi = random_vec(n, rng);
    SquareMatrix want(rep.side());
    for (int i = 0; i < n; ++i) want += (rep.generators[i] * phi + phi * rep.generators[i]) * Complex(0.0, xi[i]);
    EXPECT_LT(max_abs_diff(lap.evaluate(1, xi), want), 1e-12) << perturbation_kind(p);
  }
}

TEST_P(PerturbedOperators, InversePowersInvertDirac) {
  const int n = GetParam();
  const auto rep = build_rep(n);
  for (const auto& p : all_perturbations(n, 11)) {
    const Symbol d = dirac_symbol(rep, p);
    for (int k : {1, 2, 3}) {
      const Symbol inv = inverse_power_symbols(rep, p, k, 2);
      Symbol acc = inv;
      for (int j = 0; j < k; ++j) acc = compose(d, acc, acc.exact_to() + 1);
      EXPECT_LT(symbol_diff(acc, Symbol::identity(n, rep.side()), -2), 1e-10) << perturbation_kind(p) << " k=" << k;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, PerturbedOperators, ::testing::Values(2, 4, 6));

TEST(PerturbationMatrix, StatedForms) {
  const auto rep = build_rep(4);
  EXPECT_TRUE(perturbation_matrix(rep, NoPerturbation{}).is_zero());
  EXPECT_EQ(perturbation_matrix(rep, GradingPerturbation{}), rep.grading);
  std::mt19937_64 rng(2);
  const auto x = random_vec(4, rng);
  const auto t = random_t(4, rng);
  const auto y = random_vec(4, rng);
  EXPECT_LT(max_abs_diff(perturbation_matrix(rep, VectorGrading{x}), clifford_vector(rep, x) * rep.grading), 1e-15);
  EXPECT_LT(max_abs_diff(perturbation_matrix(rep, TorsionGrading{t}), clifford_three_form(rep, t) * rep.grading * kI),
            1e-15);
  EXPECT_LT(max_abs_diff(perturbation_matrix(rep, TorsionVector{t, y}),
                         clifford_three_form(rep, t) + clifford_vector(rep, y) * kI),
            1e-15);
  EXPECT_EQ(perturbation_kind(TorsionVector{t, y}), "torsion_vector");
}

TEST(PerturbationMatrix, TorsionGradingIsSelfAdjoint) {
  const auto rep = build_rep(6);
  std::mt19937_64 rng(3);
  const SquareMatrix phi = perturbation_matrix(rep, TorsionGrading{random_t(6, rng)});
  EXPECT_LT((phi.eigen() - phi.eigen().adjoint()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(InversePowers, RejectsOutOfRange) {
  const auto rep = build_rep(2);
  EXPECT_THROW(inverse_power_symbols(rep, NoPerturbation{}, 0), std::invalid_argument);
  EXPECT_THROW(inverse_power_symbols(rep, NoPerturbation{}, 5), std::invalid_argument);
}

TEST(CommutatorLaplacian, LinearFunction) {
  const auto rep = build_rep(4);
  JetData j = JetData::zeros(4);
  j.f1 = {1.0, -2.0, 0.5, 0.0};
  const Symbol c = commutator_laplacian_f(rep, NoPerturbation{}, j);
  const std::vector<double> xi{0.3, 0.1, -0.7, 0.2};
  double dot = 0.0;
  for (int k = 0; k < 4; ++k) dot += j.f1[k] * xi[k];
  EXPECT_LT(max_abs_diff(c.evaluate(1, xi), SquareMatrix::identity(rep.side()) * Complex(0.0, -2.0 * dot)), 1e-14);
  EXPECT_TRUE(c.evaluate(0, xi).is_zero(1e-14));
}

TEST(JetData, ValidateReportsShapes) {
  JetData j = JetData::zeros(4);
  EXPECT_NO_THROW(j.validate());
  j.u.pop_back();
  EXPECT_THROW(j.validate(), DimensionError);
  j = JetData::zeros(4);
  j.f2(0, 1) = 1.0;
  EXPECT_THROW(j.validate(), std::invalid_argument);
  j = JetData::zeros(4);
  j.perturbation = VectorGrading{{1.0, 2.0}};
  EXPECT_THROW(j.validate(), DimensionError);
  j = JetData::zeros(4);
  j.perturbation = TorsionGrading{AntisymTensor3(6)};
  EXPECT_THROW(j.validate(), DimensionError);
  j = JetData::zeros(3);
  EXPECT_THROW(j.validate(), DimensionError);
}

TEST(TraceIdentities, AllHoldOnRandomData) {
  const auto results = check_trace_identities(20, 42);
  EXPECT_GE(results.size(), 20u);
  for (const auto& r : results) EXPECT_LT(r.max_abs_err, 1e-12) << r.name << " n=" << r.n;
}

TEST(TraceIdentities, TorsionVectorYTermsCancel) {
  for (int n : {2, 4, 6}) EXPECT_LT(torsion_vector_y_cancellation(n, 20, 7), 1e-12) << n;
}
