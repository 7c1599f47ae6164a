#pragma once

// Fixed-size linear algebra for the 3-variable state space (x, y, t) and the
// 4x4 homogeneous maps used to discretize it. Deliberately tiny; no external
// dependency is worth pulling in for 3x3 arithmetic.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "sinex/errors.hpp"

namespace sinex {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {{a[0] + b[0], a[1] + b[1], a[2] + b[2]}};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {{a[0] - b[0], a[1] - b[1], a[2] - b[2]}};
  }
  friend Vec3 operator*(double s, const Vec3& a) { return {{s * a[0], s * a[1], s * a[2]}}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double norm_inf(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

struct Mat3 {
  // Row-major.
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i) r.m[i][i] = 1.0;
    return r;
  }
  static Mat3 diag(double a, double b, double c) {
    Mat3 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    return r;
  }

  std::array<double, 3>& operator[](std::size_t i) { return m[i]; }
  const std::array<double, 3>& operator[](std::size_t i) const { return m[i]; }

  friend Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
  }
  friend Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
  }
  friend Mat3 operator*(double s, const Mat3& a) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) r[i][j] = s * a[i][j];
    return r;
  }
  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
        r[i][j] = s;
      }
    return r;
  }
  friend Vec3 operator*(const Mat3& a, const Vec3& x) {
    Vec3 r;
    for (std::size_t i = 0; i < 3; ++i)
      r[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
    return r;
  }
  friend bool operator==(const Mat3&, const Mat3&) = default;
};

/// Induced infinity norm: max absolute row sum.
inline double norm_inf(const Mat3& a) {
  double n = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    n = std::max(n, std::abs(a[i][0]) + std::abs(a[i][1]) + std::abs(a[i][2]));
  return n;
}

inline double row_abs_sum(const Mat3& a, std::size_t i) {
  return std::abs(a[i][0]) + std::abs(a[i][1]) + std::abs(a[i][2]);
}

/// Gaussian elimination with partial pivoting. Empty when singular to
/// working precision.
std::optional<Mat3> inverse(const Mat3& a);
std::optional<Vec3> solve(const Mat3& a, const Vec3& rhs);

/// Infinity-norm condition number; +inf when singular.
double condition_inf(const Mat3& a);

struct Mat4 {
  std::array<std::array<double, 4>, 4> m{};

  static Mat4 identity() {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i) r.m[i][i] = 1.0;
    return r;
  }

  std::array<double, 4>& operator[](std::size_t i) { return m[i]; }
  const std::array<double, 4>& operator[](std::size_t i) const { return m[i]; }

  friend Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += a.m[i][k] * b.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }
};

inline double norm_inf(const Mat4& a) {
  double n = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += std::abs(a.m[i][j]);
    n = std::max(n, s);
  }
  return n;
}

/// Matrix exponential by scaling-and-squaring with a Taylor series.
/// The argument is scaled until its norm is at most 1/2, the series is summed
/// to convergence at working precision, and the result is squared back up.
Mat4 expm(const Mat4& a);

}  // namespace sinex
