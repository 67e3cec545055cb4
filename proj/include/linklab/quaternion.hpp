#pragma once

#include <cmath>

namespace linklab {

/// Hamilton quaternion w + x*i + y*j + z*k over doubles.
///
/// Multiplication follows ij = k, jk = i, ki = j. Vector-space scalars act on
/// the right throughout the library so that matrix actions stay on the left.
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion zero() { return {0.0}; }
  static constexpr Quaternion one() { return {1.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  friend constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }

  friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend constexpr Quaternion operator*(const Quaternion& a, double s) {
    return {a.w * s, a.x * s, a.y * s, a.z * s};
  }
  friend constexpr Quaternion operator*(double s, const Quaternion& a) { return a * s; }

  Quaternion& operator+=(const Quaternion& b) { return *this = *this + b; }
  Quaternion& operator-=(const Quaternion& b) { return *this = *this - b; }
  Quaternion& operator*=(const Quaternion& b) { return *this = *this * b; }

  friend constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

constexpr Quaternion conj(const Quaternion& a) { return {a.w, -a.x, -a.y, -a.z}; }

constexpr double norm2(const Quaternion& a) { return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z; }

inline double abs(const Quaternion& a) { return std::sqrt(norm2(a)); }

inline Quaternion inverse(const Quaternion& a) {
  const double n2 = norm2(a);
  return conj(a) * (1.0 / n2);
}

}  // namespace linklab
