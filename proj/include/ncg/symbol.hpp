#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "ncg/matrix.hpp"
#include "ncg/multi_index.hpp"

namespace ncg {

// jet order of an x-independent term
inline constexpr int kFlatJets = 1 << 20;
// exactness floor of a symbol that is known at every degree (differential operators)
inline constexpr int kExactAll = -(1 << 20);

inline Complex minus_i_pow(int k) {
  static constexpr Complex cycle[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return cycle[((k % 4) + 4) % 4];
}

// Matrix-coefficient polynomial in xi.
class XiPolynomial {
 public:
  XiPolynomial() = default;
  XiPolynomial(int dim, int side) : dim_(dim), side_(side) {
    if (dim < 1 || dim > kMaxDim) throw DimensionError("polynomial dimension out of range");
  }

  static XiPolynomial constant(int dim, const SquareMatrix& m) {
    XiPolynomial p(dim, m.side());
    p.add_term(MultiIndex{}, m);
    return p;
  }

  static XiPolynomial monomial(int dim, const MultiIndex& a, const SquareMatrix& m) {
    XiPolynomial p(dim, m.side());
    p.add_term(a, m);
    return p;
  }

  // (|xi|^2)^p * Id
  static XiPolynomial norm_squared_power(int dim, int side, int p) {
    auto r = constant(dim, SquareMatrix::identity(side));
    for (int k = 0; k < p; ++k) r = r.times_norm_squared();
    return r;
  }

  int dim() const { return dim_; }
  int side() const { return side_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<MultiIndex, SquareMatrix>& terms() const { return terms_; }

  int degree() const {
    int d = -1;
    for (const auto& [a, m] : terms_) d = std::max(d, order(a));
    return d;
  }

  double max_abs() const {
    double r = 0.0;
    for (const auto& [a, m] : terms_) r = std::max(r, m.max_abs());
    return r;
  }

  void add_term(const MultiIndex& a, const SquareMatrix& m) {
    if (m.side() != side_) throw DimensionError("coefficient side differs from polynomial side");
    const double scale = m.max_abs();
    if (scale == 0.0) return;
    auto it = terms_.find(a);
    if (it == terms_.end()) {
      terms_.emplace(a, m);
      return;
    }
    const double before = std::max(scale, it->second.max_abs());
    it->second += m;
    // cancellation down to rounding noise counts as zero
    if (it->second.max_abs() <= 1e-14 * before) terms_.erase(it);
  }

  XiPolynomial& operator+=(const XiPolynomial& o) {
    check(o);
    for (const auto& [a, m] : o.terms_) add_term(a, m);
    return *this;
  }
  XiPolynomial& operator-=(const XiPolynomial& o) {
    check(o);
    for (const auto& [a, m] : o.terms_) add_term(a, -m);
    return *this;
  }
  XiPolynomial& operator*=(Complex s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, m] : terms_) m *= s;
    return *this;
  }

  friend XiPolynomial operator+(XiPolynomial a, const XiPolynomial& b) { return a += b; }
  friend XiPolynomial operator-(XiPolynomial a, const XiPolynomial& b) { return a -= b; }
  friend XiPolynomial operator*(XiPolynomial a, Complex s) { return a *= s; }
  friend XiPolynomial operator*(Complex s, XiPolynomial a) { return a *= s; }

  friend XiPolynomial operator*(const XiPolynomial& a, const XiPolynomial& b) {
    a.check(b);
    XiPolynomial r(a.dim_, a.side_);
    for (const auto& [x, ma] : a.terms_)
      for (const auto& [y, mb] : b.terms_) r.add_term(x + y, ma * mb);
    return r;
  }

  // left or right multiplication by a constant matrix
  XiPolynomial left_mul(const SquareMatrix& m) const {
    XiPolynomial r(dim_, side_);
    for (const auto& [a, c] : terms_) r.add_term(a, m * c);
    return r;
  }
  XiPolynomial right_mul(const SquareMatrix& m) const {
    XiPolynomial r(dim_, side_);
    for (const auto& [a, c] : terms_) r.add_term(a, c * m);
    return r;
  }

  XiPolynomial d_xi(int axis) const {
    check_axis(axis);
    XiPolynomial r(dim_, side_);
    for (const auto& [a, m] : terms_)
      if (a[axis] > 0) {
        auto b = a;
        --b[axis];
        r.add_term(b, static_cast<double>(a[axis]) * m);
      }
    return r;
  }

  XiPolynomial times_xi(int axis) const {
    check_axis(axis);
    XiPolynomial r(dim_, side_);
    for (const auto& [a, m] : terms_) r.add_term(a + unit_index(axis), m);
    return r;
  }

  XiPolynomial times_norm_squared() const {
    XiPolynomial r(dim_, side_);
    for (const auto& [a, m] : terms_)
      for (int i = 0; i < dim_; ++i) {
        auto b = a;
        b[i] += 2;
        r.add_term(b, m);
      }
    return r;
  }

  SquareMatrix evaluate(std::span<const double> xi) const {
    SquareMatrix r(side_);
    for (const auto& [a, m] : terms_) {
      double mono = 1.0;
      for (int i = 0; i < dim_; ++i)
        for (int e = 0; e < a[i]; ++e) mono *= xi[i];
      r += mono * m;
    }
    return r;
  }

 private:
  void check(const XiPolynomial& o) const {
    if (o.dim_ != dim_ || o.side_ != side_) throw DimensionError("polynomial dimension or side mismatch");
  }
  void check_axis(int axis) const {
    if (axis < 0 || axis >= dim_) throw DimensionError("xi axis out of range");
  }

  int dim_ = 1;
  int side_ = 1;
  std::map<MultiIndex, SquareMatrix> terms_;
};

// numerator(x0, xi) / |xi|^(2q), plus x-derivatives of the numerator at x0
struct SymbolTerm {
  int degree = 0;
  int inv_power = 0;
  XiPolynomial value;
  int jet_order = kFlatJets;
  std::map<MultiIndex, XiPolynomial> jets;  // 1 <= |beta| <= jet_order, absent means zero

  SymbolTerm() = default;
  SymbolTerm(int degree_, int q, XiPolynomial v, int jet_order_ = kFlatJets)
      : degree(degree_), inv_power(q), value(std::move(v)), jet_order(jet_order_) {
    if (q < 0) throw std::invalid_argument("inverse power must be non-negative");
    check_homogeneous(value);
  }

  int dim() const { return value.dim(); }
  int side() const { return value.side(); }
  bool flat() const { return jet_order >= kFlatJets; }

  bool is_zero() const {
    if (!value.is_zero()) return false;
    for (const auto& [b, p] : jets)
      if (!p.is_zero()) return false;
    return true;
  }

  // x-derivative beta of the numerator; nullptr when it vanishes
  const XiPolynomial* jet(const MultiIndex& beta) const {
    const int k = order(beta);
    if (k == 0) return value.is_zero() ? nullptr : &value;
    if (flat()) return nullptr;
    if (k > jet_order)
      throw JetDepthError("x-derivative of order " + std::to_string(k) + " requested, jets known to order " +
                          std::to_string(jet_order));
    auto it = jets.find(beta);
    return (it == jets.end() || it->second.is_zero()) ? nullptr : &it->second;
  }

  void set_jet(const MultiIndex& beta, XiPolynomial p) {
    check_homogeneous(p);
    if (p.is_zero())
      jets.erase(beta);
    else
      jets[beta] = std::move(p);
  }

  SquareMatrix evaluate(std::span<const double> xi) const {
    double r2 = 0.0;
    for (int i = 0; i < dim(); ++i) r2 += xi[i] * xi[i];
    return value.evaluate(xi) * Complex(std::pow(r2, -inv_power));
  }

  void check_homogeneous(const XiPolynomial& p) const {
    for (const auto& [a, m] : p.terms())
      if (order(a) != degree + 2 * inv_power)
        throw std::logic_error("symbol term numerator is not homogeneous of degree " +
                               std::to_string(degree + 2 * inv_power));
  }
};

inline SymbolTerm zero_term(int dim, int side, int degree, int jet_order = kFlatJets) {
  return SymbolTerm(degree, 0, XiPolynomial(dim, side), jet_order);
}

inline SymbolTerm scaled(SymbolTerm t, Complex s) {
  t.value *= s;
  for (auto& [b, p] : t.jets) p *= s;
  if (s == 0.0) t.jets.clear();
  return t;
}

inline XiPolynomial raise_by(XiPolynomial p, int k) {
  for (int i = 0; i < k; ++i) p = p.times_norm_squared();
  return p;
}

// same term written over |xi|^(2q)
inline SymbolTerm with_inv_power(const SymbolTerm& t, int q) {
  if (q < t.inv_power) throw std::invalid_argument("cannot lower inverse power");
  if (q == t.inv_power) return t;
  SymbolTerm r(t.degree, q, raise_by(t.value, q - t.inv_power), t.jet_order);
  for (const auto& [b, p] : t.jets) r.set_jet(b, raise_by(p, q - t.inv_power));
  return r;
}

inline SymbolTerm truncate_jets(SymbolTerm t, int jet_order) {
  if (jet_order >= t.jet_order) return t;
  t.jet_order = jet_order;
  for (auto it = t.jets.begin(); it != t.jets.end();)
    it = order(it->first) > jet_order ? t.jets.erase(it) : std::next(it);
  return t;
}

inline SymbolTerm sum(const SymbolTerm& a, const SymbolTerm& b) {
  if (a.degree != b.degree) throw std::invalid_argument("adding symbol terms of different degree");
  const int q = std::max(a.inv_power, b.inv_power);
  auto ra = with_inv_power(a, q);
  auto rb = with_inv_power(b, q);
  const int jo = std::min(a.jet_order, b.jet_order);
  ra = truncate_jets(std::move(ra), jo);
  ra.value += rb.value;
  for (const auto& [beta, p] : rb.jets)
    if (order(beta) <= jo) {
      auto it = ra.jets.find(beta);
      if (it == ra.jets.end())
        ra.jets.emplace(beta, p);
      else {
        it->second += p;
        if (it->second.is_zero()) ra.jets.erase(it);
      }
    }
  return ra;
}

namespace detail {
// d/dxi_i of N/|xi|^(2q) = (|xi|^2 dN - 2q xi_i N)/|xi|^(2q+2)
inline XiPolynomial d_xi_numerator(const XiPolynomial& n, int q, int axis) {
  if (q == 0) return n.d_xi(axis);
  return n.d_xi(axis).times_norm_squared() - n.times_xi(axis) * Complex(2.0 * q);
}
}  // namespace detail

inline SymbolTerm d_xi(const SymbolTerm& t, int axis) {
  const int q = t.inv_power == 0 ? 0 : t.inv_power + 1;
  SymbolTerm r(t.degree - 1, q, detail::d_xi_numerator(t.value, t.inv_power, axis), t.jet_order);
  for (const auto& [b, p] : t.jets) r.set_jet(b, detail::d_xi_numerator(p, t.inv_power, axis));
  return r;
}

inline SymbolTerm d_xi(const SymbolTerm& t, const MultiIndex& alpha) {
  SymbolTerm r = t;
  for (int i = 0; i < kMaxDim; ++i)
    for (int e = 0; e < alpha[i]; ++e) r = d_xi(r, i);
  return r;
}

// d_x^alpha of t, keeping whatever jets remain
inline SymbolTerm x_shift(const SymbolTerm& t, const MultiIndex& alpha) {
  const int k = order(alpha);
  if (k == 0) return t;
  if (t.flat()) return zero_term(t.dim(), t.side(), t.degree);
  const auto* v = t.jet(alpha);
  SymbolTerm r(t.degree, t.inv_power, v ? *v : XiPolynomial(t.dim(), t.side()), t.jet_order - k);
  for (const auto& [b, p] : t.jets)
    if (order(b) > k && dominated_by(alpha, b)) r.set_jet(b - alpha, p);
  return r;
}

// pointwise product with Leibniz rule on the jets
inline SymbolTerm product(const SymbolTerm& a, const SymbolTerm& b, int max_jets = kFlatJets) {
  int jo = std::min({a.jet_order, b.jet_order, max_jets});
  const bool flat = a.flat() && b.flat();
  if (flat) jo = kFlatJets;
  SymbolTerm r(a.degree + b.degree, a.inv_power + b.inv_power, a.value * b.value, jo);
  if (flat || jo == 0) return r;
  // pair the stored jets directly; absent jets are zero
  using Entry = std::pair<MultiIndex, const XiPolynomial*>;
  auto entries = [jo](const SymbolTerm& t) {
    std::vector<Entry> e;
    if (!t.value.is_zero()) e.emplace_back(MultiIndex{}, &t.value);
    for (const auto& [g, p] : t.jets)
      if (order(g) <= jo && !p.is_zero()) e.emplace_back(g, &p);
    return e;
  };
  const auto ea = entries(a);
  const auto eb = entries(b);
  std::map<MultiIndex, XiPolynomial> acc;
  for (const auto& [ga, pa] : ea)
    for (const auto& [gb, pb] : eb) {
      const MultiIndex beta = ga + gb;
      const int k = order(beta);
      if (k == 0 || k > jo) continue;
      auto it = acc.try_emplace(beta, a.dim(), a.side()).first;
      it->second += (*pa * *pb) * Complex(binomial(beta, ga));
    }
  for (auto& [beta, p] : acc) r.set_jet(beta, std::move(p));
  return r;
}

// memoized xi-derivatives of one term
class XiDerivatives {
 public:
  explicit XiDerivatives(const SymbolTerm& t) : base_(t) {}
  const SymbolTerm& get(const MultiIndex& alpha) {
    if (order(alpha) == 0) return base_;
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    const int axis = first_axis(alpha);
    auto prev = alpha;
    --prev[axis];
    SymbolTerm d = d_xi(get(prev), axis);
    return cache_.emplace(alpha, std::move(d)).first->second;
  }

 private:
  const SymbolTerm& base_;
  std::map<MultiIndex, SymbolTerm> cache_;
};

// Complete symbol known exactly at degrees >= exact_to.
class Symbol {
 public:
  using Terms = std::map<int, SymbolTerm, std::greater<>>;

  Symbol(int dim, int side, int order, int exact_to = kExactAll)
      : dim_(dim), side_(side), order_(order), exact_to_(std::max(exact_to, kExactAll)) {}

  int dim() const { return dim_; }
  int side() const { return side_; }
  int order() const { return order_; }
  int exact_to() const { return exact_to_; }
  const Terms& terms() const { return terms_; }

  const SymbolTerm* at(int degree) const {
    auto it = terms_.find(degree);
    return it == terms_.end() ? nullptr : &it->second;
  }

  // value of the degree piece; throws if that degree is not determined
  SymbolTerm term(int degree) const {
    if (degree < exact_to_) throw TruncationError("degree " + std::to_string(degree) + " below exactness floor");
    if (const auto* t = at(degree)) return *t;
    return zero_term(dim_, side_, degree);
  }

  void add(const SymbolTerm& t) {
    if (t.dim() != dim_ || t.side() != side_) throw DimensionError("symbol term dimension mismatch");
    if (t.degree > order_)
      throw std::logic_error("term degree " + std::to_string(t.degree) + " exceeds symbol order " +
                             std::to_string(order_));
    if (t.degree < exact_to_) return;
    auto it = terms_.find(t.degree);
    if (it == terms_.end()) {
      if (!t.is_zero()) terms_.emplace(t.degree, t);
      return;
    }
    it->second = sum(it->second, t);
    if (it->second.is_zero()) terms_.erase(it);
  }

  Symbol truncated(int lowest) const {
    Symbol r(dim_, side_, order_, std::max(lowest, exact_to_));
    for (const auto& [d, t] : terms_)
      if (d >= r.exact_to_) r.terms_.emplace(d, t);
    return r;
  }

  SquareMatrix evaluate(int degree, std::span<const double> xi) const {
    if (const auto* t = at(degree)) return t->evaluate(xi);
    return SquareMatrix(side_);
  }

  static Symbol identity(int dim, int side) {
    Symbol s(dim, side, 0);
    s.add(SymbolTerm(0, 0, XiPolynomial::constant(dim, SquareMatrix::identity(side))));
    return s;
  }

  static Symbol constant(int dim, const SquareMatrix& m) {
    Symbol s(dim, m.side(), 0);
    s.add(SymbolTerm(0, 0, XiPolynomial::constant(dim, m)));
    return s;
  }

 private:
  int dim_;
  int side_;
  int order_;
  int exact_to_;
  Terms terms_;
};

// x-jets of a scalar function at x0; beta = 0 is never needed
struct FunctionJet {
  int dim = 0;
  int order = 0;
  std::map<MultiIndex, double> values;

  double at(const MultiIndex& beta) const {
    if (::ncg::order(beta) > order)
      throw JetDepthError("function derivative of order " + std::to_string(::ncg::order(beta)) +
                          " requested, jets known to order " + std::to_string(order));
    auto it = values.find(beta);
    return it == values.end() ? 0.0 : it->second;
  }
};

namespace detail {
inline void check_pair(const Symbol& a, const Symbol& b) {
  if (a.dim() != b.dim() || a.side() != b.side()) throw DimensionError("symbols have different dimension or rank");
}

inline int product_floor(const Symbol& a, const Symbol& b) {
  const long fa = static_cast<long>(a.exact_to()) + b.order();
  const long fb = static_cast<long>(b.exact_to()) + a.order();
  return static_cast<int>(std::max({fa, fb, static_cast<long>(kExactAll)}));
}

// (scale * d_x^shift f) as a scalar term carrying the remaining jets
inline SymbolTerm function_term(const FunctionJet& f, const MultiIndex& shift, Complex scale, int side) {
  const int k = order(shift);
  const int jo = f.order - k;
  SymbolTerm r(0, 0, XiPolynomial::constant(f.dim, SquareMatrix::identity(side) * (scale * f.at(shift))), jo);
  for (const auto& g : indices_up_to(f.dim, jo)) {
    if (order(g) == 0) continue;
    const double v = f.at(shift + g);
    if (v != 0.0) r.set_jet(g, XiPolynomial::constant(f.dim, SquareMatrix::identity(side) * (scale * v)));
  }
  return r;
}
}  // namespace detail

inline Symbol multiply(const Symbol& a, const Symbol& b) {
  detail::check_pair(a, b);
  Symbol out(a.dim(), a.side(), a.order() + b.order(), detail::product_floor(a, b));
  for (const auto& [da, ta] : a.terms())
    for (const auto& [db, tb] : b.terms()) out.add(product(ta, tb));
  return out;
}

// sum_alpha (-i)^|alpha|/alpha! d_xi^alpha a * d_x^alpha b, exact down to `lowest`
inline Symbol compose(const Symbol& a, const Symbol& b, int lowest, int max_jets = kFlatJets) {
  detail::check_pair(a, b);
  const int floor = detail::product_floor(a, b);
  if (lowest < floor)
    throw TruncationError("compose: inputs determine degrees >= " + std::to_string(floor) + ", requested " +
                          std::to_string(lowest));
  const int dim = a.dim();
  Symbol out(dim, a.side(), a.order() + b.order(), lowest);
  for (const auto& [da, ta] : a.terms()) {
    XiDerivatives dta(ta);
    for (const auto& [db, tb] : b.terms()) {
      const int depth = da + db - lowest;
      for (int k = 0; k <= depth; ++k) {
        if (k > 0 && tb.flat()) break;
        for (const auto& alpha : indices_of_order(dim, k)) {
          const SymbolTerm& left = dta.get(alpha);
          if (left.is_zero()) continue;
          if (k > tb.jet_order)
            throw JetDepthError("compose needs x-jets of order " + std::to_string(k) + " on the right factor, have " +
                                std::to_string(tb.jet_order));
          SymbolTerm right = x_shift(tb, alpha);
          if (right.is_zero()) continue;
          out.add(scaled(product(left, right, max_jets), minus_i_pow(k) / factorial(alpha)));
        }
      }
    }
  }
  return out;
}

// [S, f]: sum_{|beta|>=1} D_x^beta f / beta! d_xi^beta sigma(S)
inline Symbol commutator_with_function(const Symbol& s, const FunctionJet& f, int lowest) {
  if (f.dim != s.dim()) throw DimensionError("function jets and symbol differ in dimension");
  const long floor = std::max(static_cast<long>(s.exact_to()) - 1, static_cast<long>(kExactAll));
  if (lowest < floor)
    throw TruncationError("commutator: symbol determines degrees >= " + std::to_string(floor));
  Symbol out(s.dim(), s.side(), s.order() - 1, lowest);
  for (const auto& [ds, ts] : s.terms()) {
    XiDerivatives dts(ts);
    for (int k = 1; k <= ds - lowest; ++k)
      for (const auto& beta : indices_of_order(s.dim(), k)) {
        const SymbolTerm& d = dts.get(beta);
        if (d.is_zero()) continue;
        SymbolTerm coeff = detail::function_term(f, beta, minus_i_pow(k) / factorial(beta), s.side());
        if (coeff.is_zero()) continue;
        out.add(product(coeff, d));
      }
  }
  return out;
}

// degree -n piece of sigma([S,f][S,h]) by the direct multi-index sum
inline SymbolTerm commutator_product_symbol(const Symbol& s, const FunctionJet& f, const FunctionJet& h, int n) {
  const int k = s.order();
  const int dim = s.dim();
  const int total = n + 2 * k;
  if (total < 2) throw std::invalid_argument("commutator_product_symbol needs n + 2k >= 2");
  Symbol acc(dim, s.side(), 2 * k - 2);
  std::map<int, XiDerivatives> left_cache;
  std::map<std::pair<int, MultiIndex>, SymbolTerm> shifted;
  std::map<std::pair<int, MultiIndex>, std::map<MultiIndex, SymbolTerm>> right_cache;

  // each commutator carries at least one derivative, so i + j <= total - 2
  for (int i = 0; i + 2 <= total; ++i)
    for (int j = 0; i + j + 2 <= total; ++j) {
      const SymbolTerm si = s.term(k - i);
      const SymbolTerm sj = s.term(k - j);
      if (si.is_zero() || sj.is_zero()) continue;
      auto& dl = left_cache.try_emplace(k - i, *s.at(k - i)).first->second;
      const int rem = total - i - j;
      for (int sb = 1; sb <= rem; ++sb)
        for (int sd = 1; sb + sd <= rem; ++sd)
          for (int s1 = 0; sb + sd + s1 <= rem; ++s1) {
            const int s2 = rem - sb - sd - s1;
            for (const auto& beta : indices_of_order(dim, sb)) {
              const double fb = f.at(beta);
              if (fb == 0.0) continue;
              for (const auto& delta : indices_of_order(dim, sd))
                for (const auto& a1 : indices_of_order(dim, s1)) {
                  const double hv = h.at(a1 + delta);
                  if (hv == 0.0) continue;
                  for (const auto& a2 : indices_of_order(dim, s2)) {
                    const SymbolTerm& left = dl.get(a1 + a2 + beta);
                    if (left.value.is_zero()) continue;
                    auto key = std::make_pair(k - j, a2);
                    auto sit = shifted.find(key);
                    if (sit == shifted.end()) {
                      auto x = x_shift(sj, a2);
                      sit = shifted.emplace(key, truncate_jets(std::move(x), 0)).first;
                    }
                    if (sit->second.value.is_zero()) continue;
                    auto& rc = right_cache[key];
                    auto rit = rc.find(delta);
                    if (rit == rc.end()) rit = rc.emplace(delta, d_xi(sit->second, delta)).first;
                    if (rit->second.value.is_zero()) continue;
                    const Complex c = minus_i_pow(sb + s1 + sd + s2) * fb * hv /
                                      (factorial(a1) * factorial(a2) * factorial(beta) * factorial(delta));
                    acc.add(scaled(product(truncate_jets(left, 0), rit->second, 0), c));
                  }
                }
            }
          }
    }
  return acc.term(-n);
}

// parametrix of an order-2 symbol with principal part |xi|^2 Id, exact to degree -2-depth;
// jets of the result are carried to `jet_order` on the lowest term (more on higher ones)
inline Symbol parametrix_inverse(const Symbol& s, int depth, int jet_order = 2) {
  if (s.order() != 2) throw NotInvertibleError("parametrix needs an order-2 symbol");
  if (depth < 0) throw std::invalid_argument("negative parametrix depth");
  const SymbolTerm* lead = s.at(2);
  if (!lead) throw NotInvertibleError("principal symbol vanishes");
  {
    auto expect = XiPolynomial::norm_squared_power(s.dim(), s.side(), lead->inv_power + 1);
    if ((lead->value - expect).max_abs() > 1e-12)
      throw NotInvertibleError("principal symbol is not |xi|^2 Id");
    for (const auto& [b, p] : lead->jets)
      if (!p.is_zero()) throw NotInvertibleError("principal symbol depends on x");
  }
  if (s.exact_to() > 2 - depth) throw TruncationError("symbol not known deep enough for parametrix");

  bool flat = true;
  for (const auto& [d, t] : s.terms()) flat = flat && t.flat();
  const int dim = s.dim();
  const int side = s.side();
  auto jets_for = [&](int j) { return flat ? kFlatJets : jet_order + depth - j; };

  Symbol r(dim, side, -2, -2 - depth);
  r.add(SymbolTerm(-2, 1, XiPolynomial::constant(dim, SquareMatrix::identity(side)), jets_for(0)));

  for (int j = 1; j <= depth; ++j) {
    const int jj = jets_for(j);
    SymbolTerm acc = zero_term(dim, side, -j, jj);
    for (int k = 0; k <= j; ++k) {
      const SymbolTerm* sk = s.at(2 - k);
      if (!sk) continue;
      XiDerivatives ds(*sk);
      for (int l = 0; k + l <= j && l < j; ++l) {
        const SymbolTerm* rl = r.at(-2 - l);
        if (!rl) continue;
        const int a = j - k - l;
        for (const auto& alpha : indices_of_order(dim, a)) {
          const SymbolTerm& left = ds.get(alpha);
          if (left.is_zero()) continue;
          SymbolTerm right = x_shift(*rl, alpha);
          if (right.is_zero()) continue;
          acc = sum(acc, scaled(product(left, right, jj), minus_i_pow(a) / factorial(alpha)));
        }
      }
    }
    SymbolTerm next(-2 - j, acc.inv_power + 1, acc.value * Complex(-1.0), acc.jet_order);
    for (const auto& [b, p] : acc.jets) next.set_jet(b, p * Complex(-1.0));
    r.add(next);
  }
  return r;
}

}  // namespace ncg
