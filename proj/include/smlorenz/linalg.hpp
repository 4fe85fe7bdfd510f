#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "smlorenz/interval.hpp"

namespace sml {

using IVec = std::array<Interval, 3>;
using IBox = std::vector<Interval>;  // n-dimensional interval box

inline IVec ivec(const Interval& a, const Interval& b, const Interval& c) {
  return IVec{a, b, c};
}

struct IMat {
  std::array<std::array<Interval, 3>, 3> e{};

  const Interval& operator()(int i, int j) const { return e[i][j]; }
  Interval& operator()(int i, int j) { return e[i][j]; }

  static IMat identity() {
    IMat m;
    for (int i = 0; i < 3; ++i) m.e[i][i] = Interval(1.0);
    return m;
  }
};

// Small dense interval matrix of arbitrary shape (used for Jacobian hulls
// and their sub-blocks).
struct IMatN {
  int rows = 0, cols = 0;
  std::vector<Interval> a;

  IMatN() = default;
  IMatN(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  const Interval& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  Interval& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }

  static IMatN identity(int n) {
    IMatN m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Interval(1.0);
    return m;
  }

  IMatN transpose() const {
    IMatN t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IMatN block(int i0, int j0, int r, int c) const {
    IMatN b(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
  }

  IMatN operator-() const {
    IMatN m(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) m.a[k] = -a[k];
    return m;
  }
};

inline IMatN operator+(const IMatN& x, const IMatN& y) {
  IMatN m(x.rows, x.cols);
  for (size_t k = 0; k < x.a.size(); ++k) m.a[k] = x.a[k] + y.a[k];
  return m;
}

inline IMatN operator*(const IMatN& x, const IMatN& y) {
  IMatN m(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < y.cols; ++j) {
      Interval s(0.0);
      for (int k = 0; k < x.cols; ++k) s += x(i, k) * y(k, j);
      m(i, j) = s;
    }
  return m;
}

inline IBox operator*(const IMatN& m, const IBox& v) {
  IBox r(static_cast<size_t>(m.rows));
  for (int i = 0; i < m.rows; ++i) {
    Interval s(0.0);
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[static_cast<size_t>(j)];
    r[static_cast<size_t>(i)] = s;
  }
  return r;
}

inline IMatN to_matn(const IMat& m) {
  IMatN r(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j);
  return r;
}

inline IVec mul(const IMat& m, const IVec& v) {
  IVec r;
  for (int i = 0; i < 3; ++i) {
    Interval s(0.0);
    for (int j = 0; j < 3; ++j) s += m(i, j) * v[static_cast<size_t>(j)];
    r[static_cast<size_t>(i)] = s;
  }
  return r;
}

inline IMat mul(const IMat& x, const IMat& y) {
  IMat m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Interval s(0.0);
      for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
      m(i, j) = s;
    }
  return m;
}

inline IBox hull(const IBox& x, const IBox& y) {
  IBox r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = Interval::hull(x[i], y[i]);
  return r;
}

inline bool subset(const IBox& x, const IBox& y) {
  for (size_t i = 0; i < x.size(); ++i)
    if (!y[i].contains(x[i])) return false;
  return true;
}

inline IBox operator+(const IBox& x, const IBox& y) {
  IBox r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline IBox operator-(const IBox& x, const IBox& y) {
  IBox r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline double max_width(const IBox& x) {
  double w = 0.0;
  for (const auto& c : x) w = std::max(w, c.width_up());
  return w;
}

// Enclosure of the Euclidean norm over all points of the box.
inline Interval euclid_norm_range(const IBox& v) {
  Interval s(0.0);
  for (const auto& c : v) s += square(Interval(c.mig(), c.mag()));
  return sqrt(s);
}

inline Interval euclid_norm_sup(const IVec& v) {
  return euclid_norm_range(IBox(v.begin(), v.end()));
}

}  // namespace sml
