#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ncg/matrix.hpp"

namespace ncg {

struct CliffordRep {
  int dim = 0;
  std::vector<SquareMatrix> generators;
  SquareMatrix grading;

  int half_dim() const { return dim / 2; }
  int side() const { return grading.side(); }
  double trace_identity() const { return static_cast<double>(side()); }
};

inline void check_even_dim(int n) {
  if (n < 2 || n > 12 || n % 2 != 0)
    throw DimensionError("dimension must be even and in [2, 12], got " + std::to_string(n));
}

inline SquareMatrix kron(const SquareMatrix& a, const SquareMatrix& b) {
  const int s = a.side() * b.side();
  Eigen::MatrixXcd r(s, s);
  for (int i = 0; i < a.side(); ++i)
    for (int j = 0; j < a.side(); ++j) r.block(i * b.side(), j * b.side(), b.side(), b.side()) = a(i, j) * b.eigen();
  return SquareMatrix(std::move(r));
}

// gamma_a (x) sigma_z for the old generators, Id (x) i*sigma_x and Id (x) i*sigma_y for the two new ones
inline CliffordRep build_rep(int n) {
  check_even_dim(n);
  SquareMatrix sx(2), sy(2), sz(2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  sy(0, 1) = -kI;
  sy(1, 0) = kI;
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;

  std::vector<SquareMatrix> gens{kI * sx, kI * sy};
  for (int k = 4; k <= n; k += 2) {
    const int side = gens.front().side();
    std::vector<SquareMatrix> next;
    for (const auto& g : gens) next.push_back(kron(g, sz));
    next.push_back(kron(SquareMatrix::identity(side), kI * sx));
    next.push_back(kron(SquareMatrix::identity(side), kI * sy));
    gens = std::move(next);
  }

  CliffordRep rep;
  rep.dim = n;
  SquareMatrix prod = SquareMatrix::identity(gens.front().side());
  for (const auto& g : gens) prod = prod * g;
  Complex phase = 1.0;
  for (int k = 0; k < n / 2; ++k) phase *= kI;
  rep.grading = phase * prod;
  rep.generators = std::move(gens);
  return rep;
}

inline SquareMatrix clifford_vector(const CliffordRep& rep, std::span<const double> v) {
  if (static_cast<int>(v.size()) != rep.dim)
    throw DimensionError("vector length " + std::to_string(v.size()) + " != dimension " + std::to_string(rep.dim));
  SquareMatrix r(rep.side());
  for (int i = 0; i < rep.dim; ++i)
    if (v[i] != 0.0) r += v[i] * rep.generators[i];
  return r;
}

class AntisymTensor3 {
 public:
  using Key = std::array<int, 3>;

  AntisymTensor3() = default;
  explicit AntisymTensor3(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Key, double>& components() const { return comps_; }

  // any index order; the value is stored on the sorted triple with the permutation sign
  void set(int i, int j, int k, double value) {
    auto [key, sign] = canonical(i, j, k);
    if (sign == 0) {
      if (value != 0.0) throw std::invalid_argument("antisymmetric tensor with repeated index must vanish");
      return;
    }
    if (value == 0.0)
      comps_.erase(key);
    else
      comps_[key] = sign * value;
  }

  double operator()(int i, int j, int k) const {
    auto [key, sign] = canonical(i, j, k);
    if (sign == 0) return 0.0;
    auto it = comps_.find(key);
    return it == comps_.end() ? 0.0 : sign * it->second;
  }

  // T(u, v, w) = sum_{a,b,c} T_abc u_a v_b w_c
  double evaluate(std::span<const double> u, std::span<const double> v, std::span<const double> w) const {
    double s = 0.0;
    for (const auto& [key, t] : comps_) {
      const auto [a, b, c] = key;
      const double det = u[a] * (v[b] * w[c] - v[c] * w[b]) - u[b] * (v[a] * w[c] - v[c] * w[a]) +
                         u[c] * (v[a] * w[b] - v[b] * w[a]);
      s += t * det;
    }
    return s;
  }

 private:
  std::pair<Key, int> canonical(int i, int j, int k) const {
    for (int x : {i, j, k})
      if (x < 0 || x >= dim_) throw DimensionError("tensor index out of range");
    Key key{i, j, k};
    int sign = 1;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 2 - p; ++q)
        if (key[q] > key[q + 1]) {
          std::swap(key[q], key[q + 1]);
          sign = -sign;
        }
    if (key[0] == key[1] || key[1] == key[2]) sign = 0;
    return {key, sign};
  }

  int dim_ = 0;
  std::map<Key, double> comps_;
};

inline SquareMatrix clifford_three_form(const CliffordRep& rep, const AntisymTensor3& t) {
  if (t.dim() != rep.dim) throw DimensionError("three-form dimension differs from representation");
  SquareMatrix r(rep.side());
  for (const auto& [key, value] : t.components())
    r += value * (rep.generators[key[0]] * rep.generators[key[1]] * rep.generators[key[2]]);
  return r;
}

inline Complex supertrace(const CliffordRep& rep, const SquareMatrix& m) {
  if (m.side() != rep.side()) throw DimensionError("supertrace: matrix side differs from spinor rank");
  return (rep.grading * m).trace();
}

// det of the matrix whose rows are the covectors
inline double wedge_pairing(const std::vector<std::vector<double>>& covectors) {
  const auto n = covectors.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (covectors[r].size() != n) throw DimensionError("wedge_pairing needs n covectors of length n");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = covectors[r][c];
  }
  return n == 0 ? 1.0 : m.determinant();
}

// <a_1 ^ ... ^ a_{n-3} ^ T, e_1 ^ ... ^ e_n> with T = sum_{a<b<c} T_abc e_a ^ e_b ^ e_c
inline double wedge_with_three_form(const std::vector<std::vector<double>>& covectors, const AntisymTensor3& t) {
  const int n = t.dim();
  if (static_cast<int>(covectors.size()) != n - 3) throw DimensionError("wedge_with_three_form needs n-3 covectors");
  double s = 0.0;
  for (const auto& [key, value] : t.components()) {
    auto rows = covectors;
    for (int idx : key) {
      std::vector<double> e(n, 0.0);
      e[idx] = 1.0;
      rows.push_back(e);
    }
    s += value * wedge_pairing(rows);
  }
  return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace ncg
