#pragma once

#include <array>

#include "bmc/autodiff.hpp"

namespace bmc {

// Minimal 3-vector over a scalar type (double or ad::Var).
template <typename T>
struct Vec3 {
  T x{};
  T y{};
  T z{};

  Vec3() = default;
  Vec3(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

  template <typename U>
  Vec3<U> cast() const {
    return Vec3<U>(U(x), U(y), U(z));
  }

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
};

using Vec3d = Vec3<double>;

template <typename T>
Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
template <typename T>
Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
template <typename T>
Vec3<T> operator-(const Vec3<T>& a) {
  return {-a.x, -a.y, -a.z};
}
template <typename T, typename S>
Vec3<T> operator*(const S& s, const Vec3<T>& a) {
  return {T(s) * a.x, T(s) * a.y, T(s) * a.z};
}
template <typename T, typename S>
Vec3<T> operator/(const Vec3<T>& a, const S& s) {
  return {a.x / T(s), a.y / T(s), a.z / T(s)};
}

template <typename T>
bool operator==(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

template <typename T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}

template <typename T>
T norm(const Vec3<T>& a) {
  return math::sqrt(dot(a, a));
}

template <typename T>
Vec3<double> value_of(const Vec3<T>& a) {
  return {math::value_of(a.x), math::value_of(a.y), math::value_of(a.z)};
}

}  // namespace bmc
