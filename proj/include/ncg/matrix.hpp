#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

#include "ncg/errors.hpp"

namespace ncg {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};

// Square complex matrix whose side is a power of two. All binary operations
// check sides.
class SquareMatrix {
 public:
  SquareMatrix() : SquareMatrix(1) {}
  explicit SquareMatrix(int side) : m_(check_side(side), side) { m_.setZero(); }
  explicit SquareMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("matrix is not square");
    check_side(static_cast<int>(m_.rows()));
  }

  static SquareMatrix identity(int side) {
    SquareMatrix r(side);
    r.m_.setIdentity();
    return r;
  }

  int side() const { return static_cast<int>(m_.rows()); }
  Complex operator()(int r, int c) const { return m_(r, c); }
  Complex& operator()(int r, int c) { return m_(r, c); }
  const Eigen::MatrixXcd& eigen() const { return m_; }

  SquareMatrix& operator+=(const SquareMatrix& o) {
    same_side(o);
    m_ += o.m_;
    return *this;
  }
  SquareMatrix& operator-=(const SquareMatrix& o) {
    same_side(o);
    m_ -= o.m_;
    return *this;
  }
  SquareMatrix& operator*=(Complex s) {
    m_ *= s;
    return *this;
  }

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
  friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
  friend SquareMatrix operator-(SquareMatrix a) {
    a.m_ = -a.m_;
    return a;
  }
  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    a.same_side(b);
    return SquareMatrix(Eigen::MatrixXcd(a.m_ * b.m_));
  }
  friend SquareMatrix operator*(SquareMatrix a, Complex s) { return a *= s; }
  friend SquareMatrix operator*(Complex s, SquareMatrix a) { return a *= s; }

  Complex trace() const { return m_.trace(); }
  double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }
  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.side() == b.side() && a.m_ == b.m_;
  }

 private:
  static int check_side(int side) {
    if (side < 1 || (side & (side - 1)) != 0)
      throw DimensionError("matrix side " + std::to_string(side) + " is not a power of two");
    return side;
  }
  void same_side(const SquareMatrix& o) const {
    if (o.side() != side())
      throw DimensionError("matrix sides differ: " + std::to_string(side()) + " vs " +
                           std::to_string(o.side()));
  }

  Eigen::MatrixXcd m_;
};

inline double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) { return (a - b).max_abs(); }

}  // namespace ncg
