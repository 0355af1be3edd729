#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ncg/errors.hpp"

namespace ncg {

inline constexpr int kMaxDim = 12;

// exponent vector; unused trailing slots stay zero so comparisons are dimension-free
using MultiIndex = std::array<std::uint8_t, kMaxDim>;

inline MultiIndex zero_index() { return MultiIndex{}; }

inline MultiIndex unit_index(int axis) {
  MultiIndex a{};
  a[axis] = 1;
  return a;
}

inline int order(const MultiIndex& a) {
  int s = 0;
  for (auto e : a) s += e;
  return s;
}

inline double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

inline double factorial(const MultiIndex& a) {
  double r = 1.0;
  for (auto e : a) r *= factorial(e);
  return r;
}

inline MultiIndex operator+(MultiIndex a, const MultiIndex& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] = static_cast<std::uint8_t>(a[i] + b[i]);
  return a;
}

inline MultiIndex operator-(MultiIndex a, const MultiIndex& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] = static_cast<std::uint8_t>(a[i] - b[i]);
  return a;
}

inline bool dominated_by(const MultiIndex& a, const MultiIndex& b) {
  for (int i = 0; i < kMaxDim; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// product of binomials C(b_i, a_i)
inline double binomial(const MultiIndex& b, const MultiIndex& a) {
  double r = 1.0;
  for (int i = 0; i < kMaxDim; ++i) {
    for (int k = 0; k < a[i]; ++k) r = r * (b[i] - k) / (k + 1);
  }
  return r;
}

inline int first_axis(const MultiIndex& a) {
  for (int i = 0; i < kMaxDim; ++i)
    if (a[i] != 0) return i;
  return -1;
}

inline bool all_even(const MultiIndex& a) {
  for (auto e : a)
    if (e % 2 != 0) return false;
  return true;
}

namespace detail {
inline void enumerate(int dim, int axis, int left, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (axis == dim - 1) {
    cur[axis] = static_cast<std::uint8_t>(left);
    out.push_back(cur);
    cur[axis] = 0;
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[axis] = static_cast<std::uint8_t>(e);
    enumerate(dim, axis + 1, left - e, cur, out);
  }
  cur[axis] = 0;
}
}  // namespace detail

// all multi-indices in `dim` variables with |a| == k
inline std::vector<MultiIndex> indices_of_order(int dim, int k) {
  if (dim < 1 || dim > kMaxDim) throw DimensionError("multi-index dimension out of range");
  std::vector<MultiIndex> out;
  if (k < 0) return out;
  MultiIndex cur{};
  detail::enumerate(dim, 0, k, cur, out);
  return out;
}

inline std::vector<MultiIndex> indices_up_to(int dim, int k) {
  std::vector<MultiIndex> out;
  for (int j = 0; j <= k; ++j) {
    auto part = indices_of_order(dim, j);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// all g <= b componentwise
inline std::vector<MultiIndex> sub_indices(const MultiIndex& b) {
  std::vector<MultiIndex> out{MultiIndex{}};
  for (int i = 0; i < kMaxDim; ++i) {
    if (b[i] == 0) continue;
    std::vector<MultiIndex> next;
    for (const auto& g : out)
      for (int e = 0; e <= b[i]; ++e) {
        auto h = g;
        h[i] = static_cast<std::uint8_t>(e);
        next.push_back(h);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace ncg
