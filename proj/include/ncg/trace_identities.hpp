#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ncg/clifford.hpp"

namespace ncg {

// matrix-level traces behind the perturbed interior densities; each identity
// compares a trace of Clifford products with its closed form on random data
struct TraceDraw {
  std::vector<double> u, v, w, x, y;  // w plays grad f
  Eigen::MatrixXd hessian;
  Eigen::MatrixXd dv;  // dv(j, k) = d_j v_k
  AntisymTensor3 t;
};

inline TraceDraw random_trace_draw(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto vec = [&] {
    std::vector<double> r(n);
    for (auto& c : r) c = unif(rng);
    return r;
  };
  TraceDraw d{vec(), vec(), vec(), vec(), vec(), Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n), AntisymTensor3(n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      d.hessian(a, b) = unif(rng);
      d.dv(a, b) = unif(rng);
    }
  d.hessian = (0.5 * (d.hessian + d.hessian.transpose())).eval();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) d.t.set(a, b, c, unif(rng));
  return d;
}

struct TraceIdentity {
  std::string name;
  std::vector<int> dims;
  std::function<Complex(const CliffordRep&, const TraceDraw&)> lhs;
  std::function<Complex(const CliffordRep&, const TraceDraw&)> rhs;
};

inline const std::vector<TraceIdentity>& trace_identities() {
  static const std::vector<TraceIdentity> ids = [] {
    std::vector<TraceIdentity> r;
    auto c = [](const CliffordRep& rep, const std::vector<double>& a) { return clifford_vector(rep, a); };
    auto basis = [](int n, int i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      return e;
    };
    r.push_back({"grading sandwich vanishes",
                 {2, 4, 6},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   SquareMatrix s(rep.side());
                   for (int i = 0; i < rep.dim; ++i)
                     s += rep.generators[i] * rep.grading + rep.grading * rep.generators[i];
                   return (c(rep, d.u) * s * c(rep, d.v)).trace();
                 },
                 [](const CliffordRep&, const TraceDraw&) { return Complex(0.0); }});
    r.push_back({"hessian term gives sum d_j^2 f g(u,v) Tr[Id]",
                 {2, 4, 6},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   return -d.hessian.trace() * (c(rep, d.u) * c(rep, d.v)).trace();
                 },
                 [](const CliffordRep& rep, const TraceDraw& d) {
                   return Complex(d.hessian.trace() * dot(d.u, d.v) * rep.trace_identity());
                 }});
    r.push_back({"leibniz term gives 2 g(u, nabla_grad f v) Tr[Id]",
                 {2, 4, 6},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   Complex s = 0.0;
                   for (int j = 0; j < rep.dim; ++j) {
                     const Eigen::VectorXd row = d.dv.row(j).transpose();
                     const std::vector<double> dvj(row.data(), row.data() + rep.dim);
                     s += -2.0 * d.w[j] * (c(rep, d.u) * c(rep, dvj)).trace();
                   }
                   return s;
                 },
                 [](const CliffordRep& rep, const TraceDraw& d) {
                   double g = 0.0;
                   for (int j = 0; j < rep.dim; ++j)
                     for (int k = 0; k < rep.dim; ++k) g += d.w[j] * d.u[k] * d.dv(j, k);
                   return Complex(2.0 * g * rep.trace_identity());
                 }});
    r.push_back({"four-vector supertrace, n = 4",
                 {4},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   return supertrace(rep, c(rep, d.u) * c(rep, d.v) * c(rep, d.w) * c(rep, d.x));
                 },
                 [](const CliffordRep&, const TraceDraw& d) { return Complex(-4.0 * wedge_pairing({d.u, d.v, d.w, d.x})); }});
    r.push_back({"four-vector supertrace vanishes, n > 4",
                 {6, 8},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   return supertrace(rep, c(rep, d.u) * c(rep, d.v) * c(rep, d.w) * c(rep, d.x));
                 },
                 [](const CliffordRep&, const TraceDraw&) { return Complex(0.0); }});
    // the stated "0 for n != 4" does not hold at n = 2
    r.push_back({"four-vector supertrace, n = 2",
                 {2},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   return supertrace(rep, c(rep, d.u) * c(rep, d.v) * c(rep, d.w) * c(rep, d.x));
                 },
                 [](const CliffordRep&, const TraceDraw& d) {
                   return Complex(0.0, 2.0) * (dot(d.u, d.v) * wedge_pairing({d.w, d.x}) +
                                               wedge_pairing({d.u, d.v}) * dot(d.w, d.x));
                 }});
    r.push_back({"torsion supertrace, n = 6",
                 {6},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   return supertrace(rep, c(rep, d.u) * c(rep, d.v) * c(rep, d.w) * clifford_three_form(rep, d.t));
                 },
                 [](const CliffordRep&, const TraceDraw& d) {
                   return Complex(0.0, 8.0) * wedge_with_three_form({d.u, d.v, d.w}, d.t);
                 }});
    r.push_back({"torsion supertrace, n = 4",
                 {4},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   return supertrace(rep, c(rep, d.u) * c(rep, d.v) * c(rep, d.w) * clifford_three_form(rep, d.t));
                 },
                 [](const CliffordRep&, const TraceDraw& d) {
                   auto wt = [&](const std::vector<double>& a) { return wedge_with_three_form({a}, d.t); };
                   return Complex(-4.0 * (-dot(d.u, d.v) * wt(d.w) + dot(d.u, d.w) * wt(d.v) - dot(d.v, d.w) * wt(d.u)));
                 }});
    // a = sum_i a_i e_i; the torsion + vector perturbation c(T) + i c(Y)
    r.push_back({"torsion-vector sandwich c(u) {c(a), Phi} c(v)",
                 {2, 4, 6},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   const SquareMatrix phi = clifford_three_form(rep, d.t) + kI * c(rep, d.y);
                   Complex s = 0.0;
                   for (int i = 0; i < rep.dim; ++i) {
                     const SquareMatrix ci = c(rep, basis(rep.dim, i));
                     s += d.w[i] * (c(rep, d.u) * (ci * phi + phi * ci) * c(rep, d.v)).trace();
                   }
                   return s;
                 },
                 [](const CliffordRep& rep, const TraceDraw& d) {
                   return Complex(-2.0 * d.t.evaluate(d.u, d.v, d.w), 2.0 * dot(d.w, d.y) * dot(d.u, d.v)) *
                          rep.trace_identity();
                 }});
    r.push_back({"torsion-vector trace c(u) c(v) {c(a), Phi}",
                 {2, 4, 6},
                 [=](const CliffordRep& rep, const TraceDraw& d) {
                   const SquareMatrix phi = clifford_three_form(rep, d.t) + kI * c(rep, d.y);
                   Complex s = 0.0;
                   for (int i = 0; i < rep.dim; ++i) {
                     const SquareMatrix ci = c(rep, basis(rep.dim, i));
                     s += d.w[i] * (c(rep, d.u) * c(rep, d.v) * (ci * phi + phi * ci)).trace();
                   }
                   return s;
                 },
                 [](const CliffordRep& rep, const TraceDraw& d) {
                   return Complex(2.0 * d.t.evaluate(d.u, d.v, d.w), 2.0 * dot(d.w, d.y) * dot(d.u, d.v)) *
                          rep.trace_identity();
                 }});
    return r;
  }();
  return ids;
}

struct TraceIdentityResult {
  std::string name;
  int n = 0;
  int draws = 0;
  double max_abs_err = 0.0;
};

inline std::vector<TraceIdentityResult> check_trace_identities(int draws, std::uint64_t seed) {
  std::vector<TraceIdentityResult> out;
  for (const auto& id : trace_identities())
    for (int n : id.dims) {
      const CliffordRep rep = build_rep(n);
      std::mt19937_64 rng(seed + 1000 * n);
      TraceIdentityResult r{id.name, n, draws, 0.0};
      for (int k = 0; k < draws; ++k) {
        const TraceDraw d = random_trace_draw(n, rng);
        r.max_abs_err = std::max(r.max_abs_err, std::abs(id.lhs(rep, d) - id.rhs(rep, d)));
      }
      out.push_back(r);
    }
  return out;
}

// the Y terms of the two torsion-vector traces cancel in H1 + H4 (weights 1 and -1)
inline double torsion_vector_y_cancellation(int n, int draws, std::uint64_t seed) {
  const CliffordRep rep = build_rep(n);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const auto& ids = trace_identities();
  const auto& sandwich = ids[ids.size() - 2];
  const auto& right = ids.back();
  for (int k = 0; k < draws; ++k) {
    TraceDraw d = random_trace_draw(n, rng);
    const Complex with_y = sandwich.lhs(rep, d) - right.lhs(rep, d);
    for (auto& c : d.y) c = 0.0;
    const Complex without_y = sandwich.lhs(rep, d) - right.lhs(rep, d);
    worst = std::max(worst, std::abs(with_y - without_y));
  }
  return worst;
}

}  // namespace ncg
