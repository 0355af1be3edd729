#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <type_traits>
#include <vector>

#include "ncg/gaussian_rational.hpp"
#include "ncg/parallel.hpp"
#include "ncg/symbol.hpp"

namespace ncg {

// 2 prod Gamma((a_i+1)/2) / Gamma((|a|+n)/2) for all-even a, else 0
inline double sphere_monomial_integral(int n, const MultiIndex& a) {
  if (n < 1 || n > kMaxDim) throw DimensionError("sphere dimension out of range");
  if (!all_even(a)) return 0.0;
  double log_num = 0.0;
  for (int i = 0; i < n; ++i) log_num += std::lgamma((a[i] + 1) / 2.0);
  return 2.0 * std::exp(log_num - std::lgamma((order(a) + n) / 2.0));
}

// vol(S^{n-1})
inline double sphere_volume(int n) { return sphere_monomial_integral(n, MultiIndex{}); }

// exact ratio of the monomial integral to vol(S^{n-1}): prod (a_i-1)!! / prod_{k<|a|/2} (n+2k)
inline Rational sphere_monomial_ratio(int n, const MultiIndex& a) {
  if (!all_even(a)) return Rational(0);
  Rational r(1);
  for (int i = 0; i < n; ++i)
    for (int k = a[i] - 1; k > 0; k -= 2) r *= k;
  for (int k = 0; k < order(a) / 2; ++k) r /= (n + 2 * k);
  return r;
}

inline SquareMatrix integrate_term_over_sphere(const SymbolTerm& t) {
  SquareMatrix r(t.side());
  for (const auto& [a, m] : t.value.terms()) {
    const double w = sphere_monomial_integral(t.dim(), a);
    if (w != 0.0) r += w * m;
  }
  return r;
}

template <class V>
struct McEstimate {
  V estimate;
  double standard_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {
inline double abs2(Complex z) { return std::norm(z); }
inline double abs2(double x) { return x * x; }
}  // namespace detail

// uniform sampling of S^{n-1} via normalized Gaussians; the integrand returns a
// scalar (double or Complex) or a SquareMatrix. Sharded with derived seeds.
template <class F>
auto mc_sphere_oracle(int n, F&& integrand, std::size_t samples, std::uint64_t seed) {
  using V = std::decay_t<std::invoke_result_t<F&, std::span<const double>>>;
  if (samples < 10000) throw std::invalid_argument("Monte Carlo oracle needs at least 1e4 samples");
  constexpr std::size_t kShards = 8;
  const double vol = sphere_volume(n);

  struct Partial {
    V sum{};
    Eigen::MatrixXd sq;
    double sq_scalar = 0.0;
    std::size_t count = 0;
  };
  std::vector<Partial> parts(kShards);
  parallel_for(kShards, [&](std::size_t s) {
    std::mt19937_64 rng(splitmix64(seed + s));
    std::normal_distribution<double> normal;
    const std::size_t count = samples / kShards + (s < samples % kShards ? 1 : 0);
    std::vector<double> xi(n);
    Partial p;
    bool first = true;
    for (std::size_t k = 0; k < count; ++k) {
      double r2 = 0.0;
      for (auto& x : xi) {
        x = normal(rng);
        r2 += x * x;
      }
      const double r = std::sqrt(r2);
      for (auto& x : xi) x /= r;
      V val = integrand(std::span<const double>(xi));
      if constexpr (std::is_same_v<V, SquareMatrix>) {
        Eigen::MatrixXd a2 = val.eigen().cwiseAbs2();
        if (first) {
          p.sum = val;
          p.sq = a2;
        } else {
          p.sum += val;
          p.sq += a2;
        }
      } else {
        p.sum += val;
        p.sq_scalar += detail::abs2(val);
      }
      first = false;
    }
    p.count = count;
    parts[s] = std::move(p);
  });

  V total = parts[0].sum;
  for (std::size_t s = 1; s < kShards; ++s) total += parts[s].sum;
  const double N = static_cast<double>(samples);
  McEstimate<V> out;
  out.samples = samples;
  out.seed = seed;
  if constexpr (std::is_same_v<V, SquareMatrix>) {
    Eigen::MatrixXd sq = parts[0].sq;
    for (std::size_t s = 1; s < kShards; ++s) sq += parts[s].sq;
    Eigen::MatrixXd mean_abs2 = (total.eigen() / N).cwiseAbs2();
    Eigen::MatrixXd var = (sq / N - mean_abs2).cwiseMax(0.0);
    out.standard_error = vol * std::sqrt(var.maxCoeff() / N);
    out.estimate = total * Complex(vol / N);
  } else {
    double sq = 0.0;
    for (const auto& p : parts) sq += p.sq_scalar;
    const double var = std::max(0.0, sq / N - detail::abs2(total / N));
    out.standard_error = vol * std::sqrt(var / N);
    out.estimate = total * (vol / N);
  }
  return out;
}

// tensor-product trapezoidal rule on [0, 2pi)^n
inline double torus_integrate(const std::function<double(std::span<const double>)>& density, int n, int grid) {
  if (grid < 16) throw std::invalid_argument("torus grid must have at least 16 points per axis");
  if (n < 1 || n > kMaxDim) throw DimensionError("torus dimension out of range");
  const double h = 2.0 * std::numbers::pi / grid;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(grid);
  const unsigned threads = thread_cap();
  std::vector<double> partial(threads, 0.0);
  parallel_for(threads, [&](std::size_t t) {
    std::vector<double> x(n);
    double acc = 0.0;
    for (std::size_t idx = t; idx < total; idx += threads) {
      std::size_t rem = idx;
      for (int i = 0; i < n; ++i) {
        x[i] = h * static_cast<double>(rem % grid);
        rem /= grid;
      }
      acc += density(std::span<const double>(x));
    }
    partial[t] = acc;
  }, threads);
  double s = 0.0;
  for (double p : partial) s += p;
  return s * std::pow(h, n);
}

namespace detail {
inline double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

inline Complex truncated_line_integral(const std::function<Complex(double)>& f, double R) {
  const std::function<double(double)> re = [&](double x) { return f(x).real(); };
  const std::function<double(double)> im = [&](double x) { return f(x).imag(); };
  auto whole = [&](const std::function<double(double)>& g) {
    return gk(g, -R, -8.0) + gk(g, -8.0, -1.0) + gk(g, -1.0, 1.0) + gk(g, 1.0, 8.0) + gk(g, 8.0, R);
  };
  return {whole(re), whole(im)};
}
}  // namespace detail

// integral over the real line of a function decaying like |x|^-2: adaptive
// Gauss-Kronrod on [-R, R], [-2R, 2R], [-4R, 4R] and Richardson elimination of
// the R^-1 and R^-3 tails
inline Complex real_line_integral(const std::function<Complex(double)>& f, double R = 200.0) {
  const Complex i1 = detail::truncated_line_integral(f, R);
  const Complex i2 = detail::truncated_line_integral(f, 2 * R);
  const Complex i4 = detail::truncated_line_integral(f, 4 * R);
  const Complex l1 = 2.0 * i2 - i1;
  const Complex l2 = 2.0 * i4 - i2;
  return (8.0 * l2 - l1) / 7.0;
}

}  // namespace ncg
