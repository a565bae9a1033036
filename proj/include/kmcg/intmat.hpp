#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <vector>

namespace kmcg {

// All lattice arithmetic is exact.  Matrix entries of high powers of Weyl
// elements grow exponentially in indefinite type, so a fixed-width integer
// would overflow well inside the supported search caps.
using Int = boost::multiprecision::cpp_int;
using Vec = std::vector<Int>;

struct Mat {
  int n = 0;
  std::vector<Int> a;  // row-major, n*n

  Mat() = default;
  explicit Mat(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_) {}

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  Int& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
  const Int& at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }

  Mat operator*(const Mat& o) const {
    Mat r(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Int& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < n; ++j) r.at(i, j) += x * o.at(k, j);
      }
    return r;
  }

  Vec apply(const Vec& v) const {
    Vec r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
  }

  bool is_identity() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  friend bool operator==(const Mat& x, const Mat& y) { return x.n == y.n && x.a == y.a; }
  friend bool operator<(const Mat& x, const Mat& y) {
    if (x.n != y.n) return x.n < y.n;
    return x.a < y.a;
  }
};

inline bool all_nonneg(const Vec& v) {
  for (const Int& x : v)
    if (x < 0) return false;
  return true;
}

inline bool all_nonpos(const Vec& v) {
  for (const Int& x : v)
    if (x > 0) return false;
  return true;
}

inline bool is_zero(const Vec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

inline Vec negate(const Vec& v) {
  Vec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
  return r;
}

}  // namespace kmcg
