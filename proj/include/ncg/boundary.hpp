#pragma once

#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "ncg/gaussian_rational.hpp"
#include "ncg/symbol.hpp"

namespace ncg {

// dense polynomial in xi_n, ascending powers, exact coefficients
using ExactPoly = std::vector<GaussianRational>;

namespace poly {

inline void trim(ExactPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline ExactPoly add(const ExactPoly& a, const ExactPoly& b) {
  ExactPoly r(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  trim(r);
  return r;
}

inline ExactPoly scale(ExactPoly p, const GaussianRational& s) {
  for (auto& c : p) c *= s;
  trim(p);
  return p;
}

inline ExactPoly mul(const ExactPoly& a, const ExactPoly& b) {
  if (a.empty() || b.empty()) return {};
  ExactPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline ExactPoly derivative(const ExactPoly& p) {
  if (p.size() <= 1) return {};
  ExactPoly r(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) r[k - 1] = p[k] * GaussianRational(static_cast<int>(k));
  trim(r);
  return r;
}

inline GaussianRational eval(const ExactPoly& p, const GaussianRational& x) {
  GaussianRational r;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

// (x - c)^k
inline ExactPoly linear_power(const GaussianRational& c, int k) {
  ExactPoly r{GaussianRational(1)};
  for (int j = 0; j < k; ++j) r = mul(r, ExactPoly{-c, GaussianRational(1)});
  return r;
}

// quotient by (x - c), assuming exact divisibility
inline ExactPoly divide_linear(const ExactPoly& p, const GaussianRational& c) {
  if (p.size() <= 1) return {};
  ExactPoly q(p.size() - 1);
  GaussianRational carry;
  for (std::size_t k = p.size() - 1; k >= 1; --k) {
    carry = p[k] + carry * c;
    q[k - 1] = carry;
  }
  trim(q);
  return q;
}

// coefficients of p(c + t) in t
inline ExactPoly shift(const ExactPoly& p, const GaussianRational& c) {
  ExactPoly r;
  ExactPoly cur = p;
  GaussianRational fact(1);
  for (int k = 0; !cur.empty(); ++k) {
    if (k > 0) fact *= GaussianRational(k);
    r.push_back(eval(cur, c) / fact);
    cur = derivative(cur);
  }
  trim(r);
  return r;
}

// Taylor coefficients of (c + t)^(-b) up to t^(len-1)
inline ExactPoly inverse_power_series(const GaussianRational& c, int b, int len) {
  ExactPoly r;
  GaussianRational binom(1);  // C(-b, k)
  for (int k = 0; k < len; ++k) {
    if (k > 0) binom = binom * GaussianRational(Rational(-b - k + 1, k));
    r.push_back(binom * pow(c, -b - k));
  }
  return r;
}

// long division by a monic divisor
inline std::pair<ExactPoly, ExactPoly> divmod(ExactPoly p, const ExactPoly& d) {
  trim(p);
  if (p.size() < d.size()) return {{}, p};
  ExactPoly q(p.size() - d.size() + 1);
  for (std::size_t k = p.size(); k-- >= d.size();) {
    const GaussianRational c = p[k];
    q[k - (d.size() - 1)] = c;
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < d.size(); ++j) p[k - (d.size() - 1) + j] -= c * d[j];
  }
  trim(q);
  trim(p);
  return {q, p};
}

}  // namespace poly

// principal parts at +i and -i plus polynomial part; plus[k-1] multiplies (x-i)^-k
struct PartialFractions {
  ExactPoly polynomial;
  ExactPoly plus;
  ExactPoly minus;
  friend bool operator==(const PartialFractions&, const PartialFractions&) = default;
};

// p(x) / ((x-i)^a (x+i)^b) with x = xi_n
class ScalarRational {
 public:
  ScalarRational() = default;
  ScalarRational(ExactPoly num, int plus, int minus) : num_(std::move(num)), plus_(plus), minus_(minus) {
    if (plus < 0 || minus < 0) throw std::invalid_argument("negative pole order");
    reduce();
  }

  static ScalarRational constant(const GaussianRational& c) { return {ExactPoly{c}, 0, 0}; }
  // x^k / (1 + x^2)^q
  static ScalarRational power_over_norm(int k, int q) {
    ExactPoly p(k + 1);
    p[k] = GaussianRational(1);
    return {p, q, q};
  }

  const ExactPoly& numerator() const { return num_; }
  int pole_plus() const { return plus_; }
  int pole_minus() const { return minus_; }
  bool is_zero() const { return num_.empty(); }

  friend ScalarRational operator*(const ScalarRational& a, const ScalarRational& b) {
    return {poly::mul(a.num_, b.num_), a.plus_ + b.plus_, a.minus_ + b.minus_};
  }
  friend ScalarRational operator+(const ScalarRational& a, const ScalarRational& b) {
    const int p = std::max(a.plus_, b.plus_);
    const int m = std::max(a.minus_, b.minus_);
    return {poly::add(a.lifted(p, m), b.lifted(p, m)), p, m};
  }
  friend ScalarRational operator-(const ScalarRational& a) { return a.scaled(GaussianRational(-1)); }
  friend ScalarRational operator-(const ScalarRational& a, const ScalarRational& b) { return a + (-b); }
  friend bool operator==(const ScalarRational& a, const ScalarRational& b) {
    return a.plus_ == b.plus_ && a.minus_ == b.minus_ && a.num_ == b.num_;
  }

  ScalarRational scaled(const GaussianRational& s) const { return {poly::scale(num_, s), plus_, minus_}; }

  // (p' (x-i)(x+i) - a p (x+i) - b p (x-i)) / ((x-i)^(a+1) (x+i)^(b+1))
  ScalarRational derivative() const {
    const GaussianRational i = GaussianRational::i();
    const ExactPoly xm = {-i, GaussianRational(1)};
    const ExactPoly xp = {i, GaussianRational(1)};
    ExactPoly t = poly::mul(poly::mul(poly::derivative(num_), xm), xp);
    t = poly::add(t, poly::scale(poly::mul(num_, xp), GaussianRational(-plus_)));
    t = poly::add(t, poly::scale(poly::mul(num_, xm), GaussianRational(-minus_)));
    return {t, plus_ + 1, minus_ + 1};
  }

  GaussianRational evaluate(const GaussianRational& x) const {
    const GaussianRational i = GaussianRational::i();
    const GaussianRational den = pow(x - i, plus_) * pow(x + i, minus_);
    if (den.is_zero()) throw std::domain_error("evaluating a rational function at its pole");
    return poly::eval(num_, x) / den;
  }

  Complex evaluate(double x) const {
    Complex p = 0.0;
    for (auto it = num_.rbegin(); it != num_.rend(); ++it) p = p * x + it->to_complex();
    return p / (std::pow(Complex(x, -1.0), plus_) * std::pow(Complex(x, 1.0), minus_));
  }

  PartialFractions partial_fractions() const {
    const GaussianRational i = GaussianRational::i();
    PartialFractions pf;
    pf.plus = principal_part(i, plus_, -i, minus_);
    pf.minus = principal_part(-i, minus_, i, plus_);
    const ExactPoly den = poly::mul(poly::linear_power(i, plus_), poly::linear_power(-i, minus_));
    pf.polynomial = poly::divmod(num_, den).first;
    return pf;
  }

  ScalarRational pi_plus() const { return from_principal(partial_fractions().plus, GaussianRational::i(), true); }
  ScalarRational pi_minus() const { return from_principal(partial_fractions().minus, -GaussianRational::i(), false); }
  ScalarRational polynomial_part() const { return {partial_fractions().polynomial, 0, 0}; }

  // residue at +i: (1/(a-1)!) d^(a-1)/dx^(a-1) [p(x) (x+i)^(-b)] at x = i, by Leibniz
  GaussianRational residue_plus() const {
    if (plus_ == 0) return {};
    const GaussianRational i = GaussianRational::i();
    const int r = plus_ - 1;
    GaussianRational acc;
    ExactPoly dp = num_;
    for (int s = 0; s <= r; ++s) {
      if (s > 0) dp = poly::derivative(dp);
      const int t = r - s;
      Rational falling(1);
      for (int k = 0; k < t; ++k) falling *= (-minus_ - k);
      Rational binom = rational_factorial(r) / (rational_factorial(s) * rational_factorial(t));
      acc += poly::eval(dp, i) * GaussianRational(binom * falling) * pow(i + i, -minus_ - t);
    }
    return acc / GaussianRational(rational_factorial(r));
  }

  // integral over the real line divided by pi, i.e. 2i * residue at +i
  GaussianRational line_integral_over_pi() const {
    if (is_zero()) return {};
    const int deg = static_cast<int>(num_.size()) - 1;
    if (deg > plus_ + minus_ - 2)
      throw DivergenceError("integrand decays like |xi_n|^" + std::to_string(deg - plus_ - minus_) +
                            ", need at most -2");
    return GaussianRational(Rational(0), Rational(2)) * residue_plus();
  }

 private:
  ExactPoly lifted(int p, int m) const {
    const GaussianRational i = GaussianRational::i();
    return poly::mul(poly::mul(num_, poly::linear_power(i, p - plus_)), poly::linear_power(-i, m - minus_));
  }

  void reduce() {
    poly::trim(num_);
    if (num_.empty()) {
      plus_ = minus_ = 0;
      return;
    }
    const GaussianRational i = GaussianRational::i();
    while (plus_ > 0 && poly::eval(num_, i).is_zero()) {
      num_ = poly::divide_linear(num_, i);
      --plus_;
    }
    while (minus_ > 0 && poly::eval(num_, -i).is_zero()) {
      num_ = poly::divide_linear(num_, -i);
      --minus_;
    }
  }

  // coefficients c_k of (x-c)^-k, k = 1..order, for num / ((x-c)^order (x-o)^other)
  ExactPoly principal_part(const GaussianRational& c, int order, const GaussianRational& o, int other) const {
    if (order == 0 || num_.empty()) return {};
    const ExactPoly taylor = poly::shift(num_, c);
    const ExactPoly series = poly::inverse_power_series(c - o, other, order);
    ExactPoly g(order);
    for (int j = 0; j < order; ++j)
      for (int k = 0; k <= j; ++k)
        if (k < static_cast<int>(taylor.size())) g[j] += taylor[k] * series[j - k];
    ExactPoly out(order);
    for (int j = 0; j < order; ++j) out[order - 1 - j] = g[j];
    poly::trim(out);
    return out;
  }

  static ScalarRational from_principal(const ExactPoly& coeffs, const GaussianRational& c, bool plus) {
    const int a = static_cast<int>(coeffs.size());
    ExactPoly num;
    for (int k = 1; k <= a; ++k) num = poly::add(num, poly::scale(poly::linear_power(c, a - k), coeffs[k - 1]));
    return plus ? ScalarRational(num, a, 0) : ScalarRational(num, 0, a);
  }

  ExactPoly num_;
  int plus_ = 0;
  int minus_ = 0;
};

// k-th derivative of r evaluated at x
inline GaussianRational derivative_at(ScalarRational r, int k, const GaussianRational& x) {
  for (int j = 0; j < k; ++j) r = r.derivative();
  return r.evaluate(x);
}

// matrix coefficient * monomial in xi' * rational function of xi_n
struct PlaneTerm {
  SquareMatrix coeff;
  MultiIndex mono;
  ScalarRational r;
};

struct MatrixPartialFractions {
  std::vector<SquareMatrix> polynomial;
  std::vector<SquareMatrix> plus;
  std::vector<SquareMatrix> minus;
  friend bool operator==(const MatrixPartialFractions&, const MatrixPartialFractions&) = default;
};

class PlaneRational {
 public:
  PlaneRational(int dim, int side) : dim_(dim), side_(side) {}

  int dim() const { return dim_; }
  int side() const { return side_; }
  const std::vector<PlaneTerm>& terms() const { return terms_; }

  void add(PlaneTerm t) {
    if (t.coeff.side() != side_) throw DimensionError("plane rational coefficient side mismatch");
    if (t.mono[dim_ - 1] != 0) throw std::invalid_argument("xi' monomial may not involve xi_n");
    if (t.r.is_zero() || t.coeff.is_zero()) return;
    terms_.push_back(std::move(t));
  }

  PlaneRational& operator+=(const PlaneRational& o) {
    for (const auto& t : o.terms_) add(t);
    return *this;
  }

  friend PlaneRational operator*(const PlaneRational& a, const PlaneRational& b) {
    PlaneRational r(a.dim_, a.side_);
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) r.add({x.coeff * y.coeff, x.mono + y.mono, x.r * y.r});
    return r;
  }

  PlaneRational left_mul(const SquareMatrix& m) const { return map_coeff([&](const SquareMatrix& c) { return m * c; }); }
  PlaneRational right_mul(const SquareMatrix& m) const { return map_coeff([&](const SquareMatrix& c) { return c * m; }); }

  PlaneRational d_xi_n() const { return map_r([](const ScalarRational& r) { return r.derivative(); }); }
  PlaneRational pi_plus() const { return map_r([](const ScalarRational& r) { return r.pi_plus(); }); }
  PlaneRational pi_minus() const { return map_r([](const ScalarRational& r) { return r.pi_minus(); }); }
  PlaneRational polynomial_part() const { return map_r([](const ScalarRational& r) { return r.polynomial_part(); }); }

  // merged partial-fraction data per xi' monomial, with numeric matrix coefficients
  std::map<MultiIndex, MatrixPartialFractions> canonical() const {
    std::map<MultiIndex, MatrixPartialFractions> out;
    auto accumulate = [&](std::vector<SquareMatrix>& slot, const ExactPoly& c, const SquareMatrix& m) {
      if (slot.size() < c.size()) slot.resize(c.size(), SquareMatrix(side_));
      for (std::size_t k = 0; k < c.size(); ++k) slot[k] += m * c[k].to_complex();
    };
    for (const auto& t : terms_) {
      const auto pf = t.r.partial_fractions();
      auto& e = out[t.mono];
      accumulate(e.polynomial, pf.polynomial, t.coeff);
      accumulate(e.plus, pf.plus, t.coeff);
      accumulate(e.minus, pf.minus, t.coeff);
    }
    auto trim = [](std::vector<SquareMatrix>& v) {
      while (!v.empty() && v.back().is_zero(1e-14)) v.pop_back();
    };
    for (auto it = out.begin(); it != out.end();) {
      trim(it->second.polynomial);
      trim(it->second.plus);
      trim(it->second.minus);
      const bool empty = it->second.polynomial.empty() && it->second.plus.empty() && it->second.minus.empty();
      it = empty ? out.erase(it) : std::next(it);
    }
    return out;
  }

  SquareMatrix evaluate(std::span<const double> xi_prime, double xi_n) const {
    SquareMatrix r(side_);
    for (const auto& t : terms_) {
      double mono = 1.0;
      for (int i = 0; i + 1 < dim_; ++i)
        for (int e = 0; e < t.mono[i]; ++e) mono *= xi_prime[i];
      r += t.coeff * (mono * t.r.evaluate(xi_n));
    }
    return r;
  }

 private:
  template <class F>
  PlaneRational map_coeff(F&& f) const {
    PlaneRational r(dim_, side_);
    for (const auto& t : terms_) r.add({f(t.coeff), t.mono, t.r});
    return r;
  }
  template <class F>
  PlaneRational map_r(F&& f) const {
    PlaneRational r(dim_, side_);
    for (const auto& t : terms_) r.add({t.coeff, t.mono, f(t.r)});
    return r;
  }

  int dim_;
  int side_;
  std::vector<PlaneTerm> terms_;
};

// |xi|^2 -> 1 + xi_n^2 on |xi'| = 1; c(xi) splits into c(xi') + xi_n c(dx_n) monomial by monomial
inline PlaneRational restrict_to_boundary(const SymbolTerm& t) {
  const int n = t.dim();
  PlaneRational r(n, t.side());
  for (const auto& [a, m] : t.value.terms()) {
    auto mono = a;
    const int kn = mono[n - 1];
    mono[n - 1] = 0;
    r.add({m, mono, ScalarRational::power_over_norm(kn, t.inv_power)});
  }
  return r;
}

// exact traces, one scalar rational per xi' monomial
inline std::map<MultiIndex, ScalarRational> trace(const PlaneRational& p) {
  std::map<MultiIndex, ScalarRational> out;
  for (const auto& t : p.terms()) {
    const auto tr = GaussianRational::from(t.coeff.trace());
    if (tr.is_zero()) continue;
    auto it = out.find(t.mono);
    if (it == out.end())
      out.emplace(t.mono, t.r.scaled(tr));
    else
      it->second = it->second + t.r.scaled(tr);
  }
  return out;
}

// per-monomial integral over the xi_n line, in units of pi
inline std::map<MultiIndex, GaussianRational> contour_integral_pi(const std::map<MultiIndex, ScalarRational>& traced) {
  std::map<MultiIndex, GaussianRational> out;
  for (const auto& [mono, r] : traced) {
    auto v = r.line_integral_over_pi();
    if (!v.is_zero()) out.emplace(mono, v);
  }
  return out;
}

// per-monomial matrix integral over the xi_n line (pi included)
inline std::map<MultiIndex, SquareMatrix> contour_integral(const PlaneRational& p) {
  std::map<MultiIndex, SquareMatrix> out;
  for (const auto& t : p.terms()) {
    const Complex v = t.r.line_integral_over_pi().to_complex() * std::numbers::pi;
    auto it = out.find(t.mono);
    if (it == out.end())
      out.emplace(t.mono, t.coeff * v);
    else
      it->second += t.coeff * v;
  }
  return out;
}

// derivative identities at x = i used by the boundary residues
// d^m/dx^m [c / (x+i)^m], closed form c (-1)^m (2m-1)!/(m-1)! (2i)^{-2m}
inline GaussianRational inverse_power_derivative(int m, const GaussianRational& c = GaussianRational(1)) {
  return derivative_at(ScalarRational({c}, 0, m), m, GaussianRational::i());
}
inline GaussianRational inverse_power_derivative_closed(int m, const GaussianRational& c = GaussianRational(1)) {
  const GaussianRational sign((m % 2 == 0) ? Rational(1) : Rational(-1));
  return c * sign * GaussianRational(rational_factorial(2 * m - 1) / rational_factorial(m - 1)) /
         pow(GaussianRational(Rational(0), Rational(2)), 2 * m);
}

// d^m/dx^m [x / (x+i)^m], closed form (2m-2)! (-i) 2^{-2m} / (m-1)!
inline GaussianRational linear_over_power_derivative(int m) {
  return derivative_at(ScalarRational({GaussianRational(), GaussianRational(1)}, 0, m), m, GaussianRational::i());
}
inline GaussianRational linear_over_power_derivative_closed(int m) {
  return GaussianRational(Rational(0), -rational_factorial(2 * m - 2) / rational_factorial(m - 1)) /
         pow(GaussianRational(2), 2 * m);
}

}  // namespace ncg
