#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ncg/clifford.hpp"
#include "ncg/symbol.hpp"

namespace ncg {

struct NoPerturbation {};
struct GradingPerturbation {};
struct VectorGrading {
  std::vector<double> X;
};
struct TorsionGrading {
  AntisymTensor3 T;
};
struct TorsionVector {
  AntisymTensor3 T;
  std::vector<double> Y;
};

// Phi = 0 | gamma | c(X) gamma | i c(T) gamma | c(T) + i c(Y)
using PerturbationSpec = std::variant<NoPerturbation, GradingPerturbation, VectorGrading, TorsionGrading, TorsionVector>;

inline std::string perturbation_kind(const PerturbationSpec& p) {
  static const char* names[] = {"none", "grading", "vector_grading", "torsion_grading", "torsion_vector"};
  return names[p.index()];
}

inline SquareMatrix perturbation_matrix(const CliffordRep& rep, const PerturbationSpec& p) {
  return std::visit(
      [&](const auto& v) -> SquareMatrix {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NoPerturbation>) {
          return SquareMatrix(rep.side());
        } else if constexpr (std::is_same_v<T, GradingPerturbation>) {
          return rep.grading;
        } else if constexpr (std::is_same_v<T, VectorGrading>) {
          return clifford_vector(rep, v.X) * rep.grading;
        } else if constexpr (std::is_same_v<T, TorsionGrading>) {
          return kI * (clifford_three_form(rep, v.T) * rep.grading);
        } else {
          return clifford_three_form(rep, v.T) + kI * clifford_vector(rep, v.Y);
        }
      },
      p);
}

// pointwise data at x0; dv(j, k) = d_j v_k
struct JetData {
  int n = 0;
  std::vector<double> f1;
  Eigen::MatrixXd f2;
  std::vector<double> u;
  std::vector<double> v;
  Eigen::MatrixXd dv;
  Eigen::MatrixXd du;  // accepted, never used
  PerturbationSpec perturbation;

  static JetData zeros(int n) {
    JetData j;
    j.n = n;
    j.f1.assign(n, 0.0);
    j.f2 = Eigen::MatrixXd::Zero(n, n);
    j.u.assign(n, 0.0);
    j.v.assign(n, 0.0);
    j.dv = Eigen::MatrixXd::Zero(n, n);
    j.du = Eigen::MatrixXd::Zero(n, n);
    return j;
  }

  void validate() const {
    check_even_dim(n);
    auto vec = [&](const std::vector<double>& x, const char* name) {
      if (static_cast<int>(x.size()) != n) throw DimensionError(std::string(name) + " has wrong length");
    };
    auto mat = [&](const Eigen::MatrixXd& m, const char* name) {
      if (m.rows() != n || m.cols() != n) throw DimensionError(std::string(name) + " has wrong shape");
    };
    vec(f1, "f1");
    vec(u, "u");
    vec(v, "v");
    mat(f2, "f2");
    mat(dv, "dv");
    mat(du, "du");
    if ((f2 - f2.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("f2 is not symmetric");
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, VectorGrading>) vec(p.X, "X");
          if constexpr (std::is_same_v<T, TorsionGrading>) {
            if (p.T.dim() != n) throw DimensionError("T has wrong dimension");
          }
          if constexpr (std::is_same_v<T, TorsionVector>) {
            if (p.T.dim() != n) throw DimensionError("T has wrong dimension");
            vec(p.Y, "Y");
          }
        },
        perturbation);
  }

  // f at x0 to second order
  FunctionJet f_jets() const {
    FunctionJet f;
    f.dim = n;
    f.order = 2;
    for (int j = 0; j < n; ++j) {
      if (f1[j] != 0.0) f.values[unit_index(j)] = f1[j];
      for (int l = j; l < n; ++l)
        if (f2(j, l) != 0.0) f.values[unit_index(j) + unit_index(l)] = f2(j, l);
    }
    return f;
  }

  std::vector<double> dv_row(int j) const {
    std::vector<double> r(n);
    for (int k = 0; k < n; ++k) r[k] = dv(j, k);
    return r;
  }
};

inline XiPolynomial clifford_xi(const CliffordRep& rep, Complex scale) {
  XiPolynomial p(rep.dim, rep.side());
  for (int i = 0; i < rep.dim; ++i) p.add_term(unit_index(i), scale * rep.generators[i]);
  return p;
}

// sigma_1 = i c(xi), sigma_0 = Phi
inline Symbol dirac_symbol(const CliffordRep& rep, const PerturbationSpec& pert) {
  Symbol s(rep.dim, rep.side(), 1);
  s.add(SymbolTerm(1, 0, clifford_xi(rep, kI)));
  s.add(SymbolTerm(0, 0, XiPolynomial::constant(rep.dim, perturbation_matrix(rep, pert))));
  return s;
}

// |xi|^2 + i sum_i (c_i Phi + Phi c_i) xi_i + Phi^2
inline Symbol laplacian_symbol(const CliffordRep& rep, const PerturbationSpec& pert) {
  const SquareMatrix phi = perturbation_matrix(rep, pert);
  Symbol s(rep.dim, rep.side(), 2);
  s.add(SymbolTerm(2, 0, XiPolynomial::norm_squared_power(rep.dim, rep.side(), 1)));
  XiPolynomial s1(rep.dim, rep.side());
  for (int i = 0; i < rep.dim; ++i)
    s1.add_term(unit_index(i), kI * (rep.generators[i] * phi + phi * rep.generators[i]));
  s.add(SymbolTerm(1, 0, s1));
  s.add(SymbolTerm(0, 0, XiPolynomial::constant(rep.dim, phi * phi)));
  return s;
}

// symbol of D~^{-k}, exact down to degree -k - extra
inline Symbol inverse_power_symbols(const CliffordRep& rep, const PerturbationSpec& pert, int k, int extra = 1) {
  if (k < 1 || k > rep.dim + 2) throw std::invalid_argument("inverse power must lie in [1, n+2]");
  const Symbol r = parametrix_inverse(laplacian_symbol(rep, pert), extra);
  const int p = k / 2;
  Symbol acc = (k % 2 == 1) ? compose(dirac_symbol(rep, pert), r, -1 - extra) : r;
  const int start = (k % 2 == 1) ? 0 : 1;
  for (int j = start; j < p; ++j) acc = compose(r, acc, acc.order() - 2 - extra);
  return acc;
}

inline Symbol commutator_laplacian_f(const CliffordRep& rep, const PerturbationSpec& pert, const JetData& jets) {
  return commutator_with_function(laplacian_symbol(rep, pert), jets.f_jets(), 0);
}

// order-0 symbol of c(v) with first x-jets from dv
inline Symbol vector_field_symbol(const CliffordRep& rep, const JetData& jets) {
  Symbol s(rep.dim, rep.side(), 0);
  SymbolTerm t(0, 0, XiPolynomial::constant(rep.dim, clifford_vector(rep, jets.v)), 1);
  for (int j = 0; j < rep.dim; ++j) t.set_jet(unit_index(j), XiPolynomial::constant(rep.dim, clifford_vector(rep, jets.dv_row(j))));
  if (!t.is_zero()) s.add(t);
  return s;
}

// c(u) C c(v): sigma_d = c(u) C_d c(v) - i sum_j c(u) d_xi_j C_{d+1} c(d_j v), exact down to C.order - 1
inline Symbol sandwich_uv(const CliffordRep& rep, const JetData& jets, const Symbol& c) {
  const SquareMatrix cu = clifford_vector(rep, jets.u);
  const SquareMatrix cv = clifford_vector(rep, jets.v);
  const int lowest = std::max(c.order() - 1, c.exact_to());
  Symbol out(rep.dim, rep.side(), c.order(), lowest);
  for (const auto& [d, t] : c.terms()) {
    if (d < lowest) continue;
    out.add(SymbolTerm(d, t.inv_power, t.value.left_mul(cu).right_mul(cv), 0));
    if (d - 1 < lowest) continue;
    for (int j = 0; j < rep.dim; ++j) {
      const SquareMatrix cdv = clifford_vector(rep, jets.dv_row(j));
      if (cdv.is_zero()) continue;
      SymbolTerm dj = d_xi(truncate_jets(t, 0), j);
      out.add(SymbolTerm(d - 1, dj.inv_power, dj.value.left_mul(cu).right_mul(cdv) * Complex(-kI), 0));
    }
  }
  return out;
}

}  // namespace ncg
