#include <gtest/gtest.h>

#include <random>

#include "ncg/clifford.hpp"
#include "ncg/symbol.hpp"
#include "symbol_support.hpp"

using namespace ncg;
using namespace ncg::test_support;

namespace {

Symbol laplacian_like(int dim, int side) {
  // |xi|^2 Id plus x-dependent first and zeroth order parts
  std::mt19937_64 rng(21);
  Symbol s(dim, side, 2);
  s.add(SymbolTerm(2, 0, XiPolynomial::norm_squared_power(dim, side, 1)));
  SymbolTerm t1(1, 0, random_homogeneous(dim, side, 1, rng), 6);
  SymbolTerm t0(0, 0, random_homogeneous(dim, side, 0, rng, 1), 6);
  for (const auto& beta : indices_up_to(dim, 4)) {
    if (order(beta) == 0) continue;
    t1.set_jet(beta, random_homogeneous(dim, side, 1, rng, 1));
    t0.set_jet(beta, random_homogeneous(dim, side, 0, rng, 1));
  }
  s.add(t1);
  s.add(t0);
  return s;
}

}  // namespace

TEST(XiPolynomial, DerivativeAndMultiplication) {
  const int dim = 3;
  const auto id = SquareMatrix::identity(1);
  auto p = XiPolynomial::norm_squared_power(dim, 1, 2);  // |xi|^4
  std::vector<double> xi{0.3, -0.7, 1.1};
  const double r2 = 0.09 + 0.49 + 1.21;
  EXPECT_NEAR(p.evaluate(xi)(0, 0).real(), r2 * r2, 1e-12);
  EXPECT_NEAR(p.d_xi(1).evaluate(xi)(0, 0).real(), 4.0 * r2 * xi[1], 1e-12);
  EXPECT_NEAR(p.times_xi(2).evaluate(xi)(0, 0).real(), r2 * r2 * xi[2], 1e-12);
  EXPECT_EQ(p.degree(), 4);
  auto q = XiPolynomial::monomial(dim, unit_index(0), id) * XiPolynomial::monomial(dim, unit_index(0), id);
  EXPECT_EQ(q.terms().size(), 1u);
  EXPECT_EQ(q.terms().begin()->first, unit_index(0) + unit_index(0));
  EXPECT_TRUE((q - q).is_zero());
}

TEST(XiPolynomial, SideMismatchRejected) {
  XiPolynomial p(2, 2);
  EXPECT_THROW(p.add_term(MultiIndex{}, SquareMatrix::identity(4)), DimensionError);
  EXPECT_THROW(XiPolynomial(0, 2), DimensionError);
}

TEST(SymbolTerm, InhomogeneousNumeratorRejected) {
  XiPolynomial p(2, 1);
  p.add_term(MultiIndex{}, SquareMatrix::identity(1));
  p.add_term(unit_index(0), SquareMatrix::identity(1));
  EXPECT_ANY_THROW(SymbolTerm(0, 0, p));
}

TEST(SymbolTerm, JetBeyondDeclaredOrderThrows) {
  SymbolTerm t(0, 0, XiPolynomial::constant(2, SquareMatrix::identity(1)), 1);
  EXPECT_EQ(t.jet(unit_index(0)), nullptr);
  EXPECT_THROW(t.jet(unit_index(0) + unit_index(1)), JetDepthError);
}

TEST(Symbol, TermBelowExactnessFloorThrows) {
  Symbol s(2, 1, 0, -1);
  EXPECT_NO_THROW(s.term(-1));
  EXPECT_THROW(s.term(-2), TruncationError);
}

TEST(Compose, IdentityIsNeutral) {
  std::mt19937_64 rng(1);
  const Symbol s = random_symbol(2, 2, 1, -2, 3, 5, rng);
  const Symbol l = compose(Symbol::identity(2, 2), s, -2);
  const Symbol r = compose(s, Symbol::identity(2, 2), -2);
  for (int d = 1; d >= -2; --d) {
    EXPECT_LT(max_term_diff(l.term(d), s.term(d), 2), 1e-12);
    EXPECT_LT(max_term_diff(r.term(d), s.term(d), 2), 1e-12);
  }
}

TEST(Compose, FlatRightFactorReducesToPointwiseProduct) {
  std::mt19937_64 rng(2);
  const Symbol a = random_symbol(2, 2, 1, -1, 2, 4, rng);
  Symbol b(2, 2, 1);
  b.add(SymbolTerm(1, 0, random_homogeneous(2, 2, 1, rng)));
  const Symbol c = compose(a, b, 0);
  const Symbol m = multiply(a, b);
  for (int d = 2; d >= 0; --d) EXPECT_LT(max_term_diff(c.term(d), m.term(d), 2), 1e-12);
}

TEST(Compose, RequestBelowInputFloorThrows) {
  std::mt19937_64 rng(3);
  const Symbol a = random_symbol(2, 2, 1, -1, 2, 4, rng);
  EXPECT_THROW(compose(a, a, -2), TruncationError);
  EXPECT_NO_THROW(compose(a, a, 0));
}

TEST(Compose, MissingJetsReportedNotTruncated) {
  std::mt19937_64 rng(4);
  const Symbol a = random_symbol(2, 2, 1, 0, 1, 4, rng);
  const Symbol b = random_symbol(2, 2, 1, 0, 0, 0, rng);
  EXPECT_THROW(compose(a, b, 1), JetDepthError);
}

TEST(Commutator, LaplacianGivesMinusSumOfSecondDerivatives) {
  const int dim = 4;
  Symbol lap(dim, 1, 2);
  lap.add(SymbolTerm(2, 0, XiPolynomial::norm_squared_power(dim, 1, 1)));
  std::mt19937_64 rng(8);
  const FunctionJet f = random_function(dim, 2, 2, rng);
  const Symbol c = commutator_with_function(lap, f, 0);
  double expect0 = 0.0;
  for (int j = 0; j < dim; ++j) expect0 -= f.at(unit_index(j) + unit_index(j));
  std::vector<double> xi{0.2, -0.4, 0.5, 0.1};
  EXPECT_NEAR(std::abs(c.evaluate(0, xi)(0, 0) - Complex(expect0)), 0.0, 1e-12);
  Complex expect1 = 0.0;
  for (int j = 0; j < dim; ++j) expect1 += -2.0 * kI * f.at(unit_index(j)) * xi[j];
  EXPECT_NEAR(std::abs(c.evaluate(1, xi)(0, 0) - expect1), 0.0, 1e-12);
}

TEST(Commutator, ConstantFunctionGivesZero) {
  std::mt19937_64 rng(9);
  const Symbol s = random_symbol(2, 2, 1, -2, 3, 5, rng);
  FunctionJet f{2, 4, {}};
  const Symbol c = commutator_with_function(s, f, -2);
  EXPECT_TRUE(c.terms().empty());
}

TEST(Parametrix, InvertsDownToRequestedDepth) {
  for (int dim : {2, 4}) {
    const Symbol s = laplacian_like(dim, 2);
    const int depth = 3;
    const Symbol r = parametrix_inverse(s, depth, 2);
    EXPECT_EQ(r.order(), -2);
    const Symbol left = compose(s, r, -depth, 0);
    const Symbol right = compose(r, s, -depth, 0);
    for (int d = 0; d >= -depth; --d) {
      const SymbolTerm expect =
          d == 0 ? SymbolTerm(0, 0, XiPolynomial::constant(dim, SquareMatrix::identity(2))) : zero_term(dim, 2, d);
      EXPECT_LT(max_term_diff(left.term(d), expect, dim), 1e-11) << "dim " << dim << " degree " << d;
      EXPECT_LT(max_term_diff(right.term(d), expect, dim), 1e-11) << "dim " << dim << " degree " << d;
    }
  }
}

TEST(Parametrix, RejectsNonScalarPrincipalPart) {
  Symbol s(2, 2, 2);
  s.add(SymbolTerm(2, 0, XiPolynomial::norm_squared_power(2, 2, 1) * Complex(2.0)));
  EXPECT_THROW(parametrix_inverse(s, 1), NotInvertibleError);
  Symbol first(2, 2, 1);
  first.add(SymbolTerm(1, 0, XiPolynomial::monomial(2, unit_index(0), SquareMatrix::identity(2))));
  EXPECT_THROW(parametrix_inverse(first, 1), NotInvertibleError);
}

struct ProductCase {
  int n;
  int k;
};

class CommutatorProduct : public ::testing::TestWithParam<ProductCase> {};

// direct multi-index sum against composing the two commutators
TEST_P(CommutatorProduct, DirectSumEqualsComposition) {
  const auto [n, k] = GetParam();
  const int total = n + 2 * k;
  const int side = n >= 4 ? 1 : 2;
  std::mt19937_64 rng(100 + 10 * n + k);
  const int lowest = -n - k + 2;
  const Symbol s = random_symbol(n, side, k, lowest, 2, 2 * total + 2, rng);
  const FunctionJet f = random_function(n, total, 2 * total + 2, rng);
  const FunctionJet h = random_function(n, total, 2 * total + 2, rng);

  const SymbolTerm direct = commutator_product_symbol(s, f, h, n);
  const Symbol a = commutator_with_function(s, f, lowest - 1);
  const Symbol b = commutator_with_function(s, h, lowest - 1);
  const SymbolTerm composed = compose(a, b, -n, 0).term(-n);
  EXPECT_LT(max_term_diff(direct, composed, n), 1e-9 * term_scale(composed, n));
  EXPECT_GT(max_term_diff(composed, zero_term(n, side, -n), n), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(SmallOrders, CommutatorProduct,
                         ::testing::Values(ProductCase{2, 0}, ProductCase{2, 1}, ProductCase{2, 2}, ProductCase{4, 0},
                                           ProductCase{4, 1}, ProductCase{6, 0}),
                         [](const auto& info) {
                           return "n" + std::to_string(info.param.n) + "_k" + std::to_string(info.param.k);
                         });

TEST(CommutatorProductSymbol, ConstantFunctionGivesZero) {
  std::mt19937_64 rng(31);
  const Symbol s = random_symbol(2, 2, 1, -1, 2, 8, rng);
  FunctionJet f{2, 8, {}};
  const FunctionJet h = random_function(2, 4, 8, rng);
  EXPECT_TRUE(commutator_product_symbol(s, f, h, 2).is_zero());
}

TEST(CommutatorProductSymbol, ShallowJetsReported) {
  std::mt19937_64 rng(32);
  const Symbol s = random_symbol(2, 2, 1, -1, 2, 8, rng);
  const FunctionJet f = random_function(2, 1, 1, rng);
  const FunctionJet h = random_function(2, 1, 1, rng);
  EXPECT_THROW(commutator_product_symbol(s, f, h, 2), JetDepthError);
}
