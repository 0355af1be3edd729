// one PASS/FAIL line per acceptance criterion; exit status 1 if any fails
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "ncg/boundary.hpp"
#include "ncg/residue.hpp"
#include "ncg/suite.hpp"
#include "ncg/trace_identities.hpp"
#include "symbol_support.hpp"

using namespace ncg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// 1. supertrace of generator products
Outcome clifford_supertraces() {
  double worst = 0.0;
  for (int n : {2, 4, 6}) {
    const auto rep = build_rep(n);
    const int m = n / 2;
    Complex top = std::ldexp(1.0, m);
    for (int k = 0; k < m; ++k) top /= kI;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      SquareMatrix prod = SquareMatrix::identity(rep.side());
      int q = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          prod = prod * rep.generators[i];
          ++q;
        }
      worst = std::max(worst, std::abs(supertrace(rep, prod) - (q == n ? top : Complex(0.0))));
    }
  }
  std::ostringstream d;
  d << "n in {2,4,6}, all generator subsets, max err " << worst;
  return {worst < 1e-12, d.str()};
}

SymbolTerm clifford_xi_term(const CliffordRep& rep, int extra_xi_n) {
  const int n = rep.dim;
  XiPolynomial p(n, rep.side());
  for (int k = 0; k < n; ++k) {
    MultiIndex a = unit_index(k);
    a[n - 1] += static_cast<std::uint8_t>(extra_xi_n);
    p.add_term(a, rep.generators[k] * kI);
  }
  return SymbolTerm(extra_xi_n - 1, 1, p);
}

// 2. the three worked projections, coefficient by coefficient
Outcome projection_vectors() {
  const GaussianRational i = GaussianRational::i();
  const GaussianRational half(Rational(1, 2));
  auto over = [](const GaussianRational& c) { return ScalarRational({c}, 1, 0); };
  int checked = 0, failed = 0;
  auto check = [&](bool ok) {
    ++checked;
    if (!ok) ++failed;
  };
  check(ScalarRational::power_over_norm(0, 1).pi_plus() == over(-(i * half)));
  check(ScalarRational::power_over_norm(1, 1).pi_plus() == over(half));
  check(ScalarRational::power_over_norm(2, 1).pi_plus() == over(i * half));
  for (int n : {2, 4, 6}) {
    const auto rep = build_rep(n);
    const auto& g = rep.generators;
    const auto id = SquareMatrix::identity(rep.side());
    PlaneRational a(n, rep.side()), b(n, rep.side());
    for (int k = 0; k + 1 < n; ++k) {
      a.add({g[k], unit_index(k), over(half)});
      b.add({g[k], unit_index(k), over(i * half)});
    }
    a.add({g[n - 1], MultiIndex{}, over(i * half)});
    b.add({g[n - 1], MultiIndex{}, over(-half)});
    check(restrict_to_boundary(clifford_xi_term(rep, 0)).pi_plus().canonical() == a.canonical());
    check(restrict_to_boundary(clifford_xi_term(rep, 1)).pi_plus().canonical() == b.canonical());
    for (int l = 0; l + 1 < n; ++l) {
      PlaneRational c(n, rep.side());
      c.add({id, unit_index(l), over(-(i * half))});
      const SymbolTerm t(-1, 1, XiPolynomial::monomial(n, unit_index(l), id));
      check(restrict_to_boundary(t).pi_plus().canonical() == c.canonical());
    }
  }
  return {failed == 0, std::to_string(checked - failed) + "/" + std::to_string(checked) + " exact equalities"};
}

// 3. derivatives at xi_n = i
Outcome derivative_identities() {
  int failed = 0;
  for (int m = 1; m <= 5; ++m) {
    if (!(inverse_power_derivative(m) == inverse_power_derivative_closed(m))) ++failed;
    if (!(inverse_power_derivative(m, GaussianRational::i()) == GaussianRational::i() * inverse_power_derivative_closed(m)))
      ++failed;
    if (!(linear_over_power_derivative(m) == linear_over_power_derivative_closed(m))) ++failed;
  }
  return {failed == 0, "m=1..5 exact; with the literal numerator i the first identity carries an extra factor i"};
}

// 4. interior divergence
Outcome interior_divergence() {
  double worst_rel = 0.0, worst_route = 0.0, worst_torus = 0.0;
  for (int n : {2, 4, 6}) {
    const auto rep = build_rep(n);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const JetData j = random_jets(TheoremId::kThm3_4, n, seed);
      const Complex a = interior_density_compose(rep, j, DensityKind::kPlain);
      const Complex b = interior_density_assembly(rep, j, DensityKind::kPlain);
      const Complex want = -j.f2.trace() * std::ldexp(1.0, n / 2) * sphere_volume(n);
      worst_rel = std::max(worst_rel, std::abs(a - want) / std::abs(want));
      worst_route = std::max(worst_route, rel(a, b));
      const Complex sa = interior_density_compose(rep, j, DensityKind::kSandwich);
      const Complex sb = interior_density_assembly(rep, j, DensityKind::kSandwich);
      worst_route = std::max(worst_route, rel(sa, sb));
    }
  }
  for (int n : {2, 4}) {
    const LinearDensity density = plain_density_functional(build_rep(n));
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
    worst_torus = std::max(worst_torus, std::hypot(re, im));
  }
  std::ostringstream d;
  d << "density rel " << worst_rel << ", torus " << worst_torus << ", routes " << worst_route;
  return {worst_rel < 1e-9 && worst_torus < 1e-9 && worst_route < 1e-9, d.str()};
}

// 5. boundary coefficients, unit normal derivative
Outcome boundary_coefficients() {
  bool exact = true;
  double worst = 0.0;
  for (int m : {2, 3}) {
    const int n = 2 * m;
    const auto rep = build_rep(n);
    JetData j = JetData::zeros(n);
    j.f1[n - 1] = 1.0;
    const GaussianRational tr(Rational(1 << m));
    const auto c1 = boundary_case1(rep, j, DensityKind::kPlain, true);
    const auto c2 = boundary_case2(rep, j, DensityKind::kPlain, true);
    exact = exact && c1.units == case1_coefficient(m) * tr && c2.units == case2_coefficient(m) * tr;
    worst = std::max({worst, std::abs(c1.value - c1.quadrature) / std::abs(c1.value),
                      std::abs(c2.value - c2.quadrature) / std::abs(c2.value)});
  }
  std::ostringstream d;
  d << (exact ? "exact" : "NOT exact") << " for m=2,3, quadrature rel " << worst;
  return {exact && worst < 1e-6, d.str()};
}

// 6. perturbed interior functionals
Outcome perturbed_interior() {
  double worst_trace = 0.0;
  for (const auto& r : check_trace_identities(20, 2024)) worst_trace = std::max(worst_trace, r.max_abs_err);
  for (int n : {2, 4, 6}) worst_trace = std::max(worst_trace, torsion_vector_y_cancellation(n, 20, 2024));
  SuiteConfig cfg;
  cfg.theorems = {TheoremId::kThm4_12, TheoremId::kThm4_13, TheoremId::kThm4_14, TheoremId::kEq4_43};
  const SuiteResult res = run_suite(cfg);
  int mismatches = 0, deltas = 0, undocumented = 0;
  for (const auto& r : res.records) {
    if (r.status == Status::kMismatch) ++mismatches;
    if (std::abs(r.literature_rhs - r.rhs) > 1e-9 * std::max(1.0, std::abs(r.rhs))) {
      ++deltas;
      if (literature_deltas(parse_theorem(r.theorem).value(), r.n).empty()) ++undocumented;
    }
  }
  std::ostringstream d;
  d << "trace identities max err " << worst_trace << "; " << res.records.size() << " records, " << mismatches
    << " mismatch, " << deltas << " with enumerated literature deltas, " << res.skipped.size()
    << " skipped where the stated form is 0";
  return {worst_trace < 1e-12 && mismatches == 0 && undocumented == 0, d.str()};
}

// 7. perturbed boundary functionals: fit lhs = a * tangential + b * d_n f g(u, v) over 10 draws
Outcome perturbed_boundary() {
  double worst_fit = 0.0, worst_coeff = 0.0, worst_quad = 0.0;
  for (TheoremId id : {TheoremId::kThm4_16, TheoremId::kThm4_17})
    for (int n : {2, 4, 6}) {
      if (validity_issue(id, n)) continue;
      const auto rep = build_rep(n);
      const int m = n / 2;
      Eigen::MatrixXcd a(10, 2);
      Eigen::VectorXcd y(10);
      for (int k = 0; k < 10; ++k) {
        const JetData j = random_jets(id, n, k + 1);
        const JetInvariants inv(j);
        const auto d = boundary_density(rep, j, info(id).kind, info(id).region, k < 2);
        a(k, 0) = inv.tangential;
        a(k, 1) = inv.dn_f * inv.guv;
        y(k) = d.value;
        if (k < 2) worst_quad = std::max(worst_quad, std::abs(d.value - d.quadrature) / std::max(1.0, std::abs(d.value)));
      }
      const Eigen::VectorXcd c = a.colPivHouseholderQr().solve(y);
      worst_fit = std::max(worst_fit, (a * c - y).cwiseAbs().maxCoeff() / y.cwiseAbs().maxCoeff());
      const double s = std::numbers::pi * boundary_sphere_volume(n) * std::ldexp(1.0, m);
      const Complex want_t = id == TheoremId::kThm4_16 ? tangential_coefficient(m).to_complex() * s : 0.0;
      const Complex want_n =
          -(id == TheoremId::kThm4_16 ? case1_coefficient(m) : case2_coefficient(m)).to_complex() * s;
      worst_coeff = std::max({worst_coeff, std::abs(c(0) - want_t) / std::abs(want_n), std::abs(c(1) - want_n) / std::abs(want_n)});
    }
  std::ostringstream d;
  d << "fit residual " << worst_fit << ", coefficients rel " << worst_coeff << ", contour vs quadrature " << worst_quad;
  return {worst_fit < 1e-9 && worst_coeff < 1e-9 && worst_quad < 1e-6, d.str()};
}

// 8. direct commutator product against generic composition
Outcome composition_oracle() {
  using namespace test_support;
  double worst = 0.0;
  bool nontrivial = true;
  for (auto [n, k] : {std::pair{2, 0}, {2, 1}, {2, 2}, {4, 0}, {4, 1}, {6, 0}}) {
    const int total = n + 2 * k;
    const int side = n >= 4 ? 1 : 2;
    std::mt19937_64 rng(100 + 10 * n + k);
    const int lowest = -n - k + 2;
    const Symbol s = random_symbol(n, side, k, lowest, 2, 2 * total + 2, rng);
    const FunctionJet f = random_function(n, total, 2 * total + 2, rng);
    const FunctionJet h = random_function(n, total, 2 * total + 2, rng);
    const SymbolTerm direct = commutator_product_symbol(s, f, h, n);
    const SymbolTerm composed =
        compose(commutator_with_function(s, f, lowest - 1), commutator_with_function(s, h, lowest - 1), -n, 0).term(-n);
    worst = std::max(worst, max_term_diff(direct, composed, n) / term_scale(composed, n));
    nontrivial = nontrivial && max_term_diff(composed, zero_term(n, side, -n), n) > 1e-6;
  }
  std::ostringstream d;
  d << "n + 2k <= 6, rel " << worst;
  return {worst < 1e-9 && nontrivial, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0 means no runtime bound
  };
  const std::vector<Criterion> criteria{
      {1, "Clifford supertraces", clifford_supertraces, 1.0},
      {2, "pi+ projection vectors", projection_vectors, 1.0},
      {3, "residue derivative identities", derivative_identities, 0.0},
      {4, "interior divergence", interior_divergence, 10.0},
      {5, "boundary coefficients", boundary_coefficients, 0.0},
      {6, "perturbed interior functionals", perturbed_interior, 0.0},
      {7, "perturbed boundary functionals", perturbed_boundary, 0.0},
      {8, "composition oracle", composition_oracle, 0.0},
      {9, "default suite wall-clock",
       [] {
         const SuiteResult r = run_suite(SuiteConfig{});
         return Outcome{r.all_ok(), std::to_string(r.records.size()) + " records, no mismatch: " +
                                        (r.all_ok() ? "yes" : "no")};
       },
       60.0},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    all = all && o.pass;
    std::printf("criterion %d: %s  %s (%s, %.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
  }
  return all ? 0 : 1;
}
