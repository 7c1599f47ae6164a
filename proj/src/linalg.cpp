#include "sinex/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sinex {

namespace {

// LU decomposition with partial pivoting on an augmented copy.
// Returns false when a pivot is zero to working precision.
bool invert_inplace(std::array<std::array<double, 6>, 3>& aug) {
  for (std::size_t col = 0; col < 3; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < 3; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    if (aug[pivot][col] == 0.0) return false;
    std::swap(aug[col], aug[pivot]);
    const double inv = 1.0 / aug[col][col];
    for (std::size_t j = 0; j < 6; ++j) aug[col][j] *= inv;
    for (std::size_t r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = aug[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < 6; ++j) aug[r][j] -= f * aug[col][j];
    }
  }
  return true;
}

}  // namespace

std::optional<Mat3> inverse(const Mat3& a) {
  std::array<std::array<double, 6>, 3> aug{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) aug[i][j] = a[i][j];
    aug[i][3 + i] = 1.0;
  }
  if (!invert_inplace(aug)) return std::nullopt;
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i][j] = aug[i][3 + j];
  return r;
}

std::optional<Vec3> solve(const Mat3& a, const Vec3& rhs) {
  auto inv = inverse(a);
  if (!inv) return std::nullopt;
  return *inv * rhs;
}

double condition_inf(const Mat3& a) {
  auto inv = inverse(a);
  if (!inv) return std::numeric_limits<double>::infinity();
  return norm_inf(a) * norm_inf(*inv);
}

Mat4 expm(const Mat4& a) {
  // Scale so the Taylor series converges fast: ||A / 2^s||_inf <= 1/2.
  const double n = norm_inf(a);
  int squarings = 0;
  double scale = 1.0;
  if (n > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(n / 0.5)));
    scale = std::ldexp(1.0, -squarings);
  }
  Mat4 b;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) b.m[i][j] = a.m[i][j] * scale;

  Mat4 sum = Mat4::identity();
  Mat4 term = Mat4::identity();
  for (int k = 1; k <= 40; ++k) {
    term = term * b;
    const double inv_k = 1.0 / k;
    double term_norm = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        term.m[i][j] *= inv_k;
        term_norm = std::max(term_norm, std::abs(term.m[i][j]));
        sum.m[i][j] += term.m[i][j];
      }
    if (term_norm < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace sinex
