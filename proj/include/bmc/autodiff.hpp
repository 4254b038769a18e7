#pragma once

// Reverse-mode differentiation on a per-evaluation tape.
//
// A Var is a value plus an index into the Tape that recorded it. Every
// operation on tape-backed Vars appends one node holding the local partial
// derivatives with respect to (at most) two operands. Vars built from plain
// doubles are constants and record nothing.
//
// Non-differentiable points (interval kinks, clamps, hull boundaries, norms
// at zero) use the zero subgradient and mark their node as a kink so the
// gradient report can flag the joints that fed into it.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace bmc::ad {

class Var;

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // New independent variable.
  Var variable(double value);

  std::size_t size() const { return nodes_.size(); }

  // d(output)/d(node) for every recorded node.
  std::vector<double> adjoints(const Var& output) const;

  // Per node: 1 if the node is a leaf (or intermediate) whose value reaches
  // the output through a kink node.
  std::vector<char> kink_taint(const Var& output) const;

  // Internal recording interface used by the operators below.
  int record(int a, double da, int b = -1, double db = 0.0);
  void mark_kink(int node) { kinks_[static_cast<std::size_t>(node)] = 1; }

 private:
  struct Node {
    int a;
    int b;
    double da;
    double db;
  };
  std::vector<Node> nodes_;
  std::vector<char> kinks_;
};

class Var {
 public:
  Var() = default;
  Var(double value) : value_(value) {}  // NOLINT: implicit constants

  double value() const { return value_; }
  int index() const { return index_; }
  Tape* tape() const { return tape_; }
  bool is_constant() const { return tape_ == nullptr; }

  Var& operator+=(const Var& rhs);
  Var& operator-=(const Var& rhs);
  Var& operator*=(const Var& rhs);
  Var& operator/=(const Var& rhs);

  // Result of an elementary operation with local partials.
  static Var unary(const Var& x, double value, double dx);
  static Var binary(const Var& x, const Var& y, double value, double dx,
                    double dy);

 private:
  friend class Tape;
  Var(double value, int index, Tape* tape)
      : value_(value), index_(index), tape_(tape) {}

  double value_ = 0.0;
  int index_ = -1;
  Tape* tape_ = nullptr;
};

inline Var Tape::variable(double value) {
  return Var(value, record(-1, 0.0), this);
}

inline Var Var::unary(const Var& x, double value, double dx) {
  if (x.tape_ == nullptr) {
    return Var(value);
  }
  return Var(value, x.tape_->record(x.index_, dx), x.tape_);
}

inline Var Var::binary(const Var& x, const Var& y, double value, double dx,
                       double dy) {
  if (x.tape_ == nullptr && y.tape_ == nullptr) {
    return Var(value);
  }
  if (x.tape_ == nullptr) {
    return Var(value, y.tape_->record(y.index_, dy), y.tape_);
  }
  if (y.tape_ == nullptr) {
    return Var(value, x.tape_->record(x.index_, dx), x.tape_);
  }
  assert(x.tape_ == y.tape_);
  return Var(value, x.tape_->record(x.index_, dx, y.index_, dy), x.tape_);
}

inline Var operator+(const Var& x, const Var& y) {
  return Var::binary(x, y, x.value() + y.value(), 1.0, 1.0);
}
inline Var operator-(const Var& x, const Var& y) {
  return Var::binary(x, y, x.value() - y.value(), 1.0, -1.0);
}
inline Var operator*(const Var& x, const Var& y) {
  return Var::binary(x, y, x.value() * y.value(), y.value(), x.value());
}
inline Var operator/(const Var& x, const Var& y) {
  const double q = x.value() / y.value();
  return Var::binary(x, y, q, 1.0 / y.value(), -q / y.value());
}
inline Var operator-(const Var& x) { return Var::unary(x, -x.value(), -1.0); }

inline Var& Var::operator+=(const Var& rhs) { return *this = *this + rhs; }
inline Var& Var::operator-=(const Var& rhs) { return *this = *this - rhs; }
inline Var& Var::operator*=(const Var& rhs) { return *this = *this * rhs; }
inline Var& Var::operator/=(const Var& rhs) { return *this = *this / rhs; }

inline bool operator<(const Var& x, const Var& y) { return x.value() < y.value(); }
inline bool operator>(const Var& x, const Var& y) { return x.value() > y.value(); }
inline bool operator<=(const Var& x, const Var& y) { return x.value() <= y.value(); }
inline bool operator>=(const Var& x, const Var& y) { return x.value() >= y.value(); }
inline bool operator==(const Var& x, const Var& y) { return x.value() == y.value(); }

}  // namespace bmc::ad

// Scalar-generic math used by every templated geometry routine. Each
// function has a double overload and a Var overload with identical value
// semantics, so the two instantiations produce bit-identical values.
namespace bmc::math {

using ad::Var;

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.value(); }

inline void mark_kink(double) {}
inline void mark_kink(const Var& x) {
  if (!x.is_constant()) {
    x.tape()->mark_kink(x.index());
  }
}

// Zero that depends on x with zero partial, marked as a kink. Used where a
// piecewise function is evaluated exactly at a breakpoint so the flag
// reaches the joints that produced x.
inline double kink_zero(double) { return 0.0; }
inline Var kink_zero(const Var& x) {
  Var out = Var::unary(x, 0.0, 0.0);
  mark_kink(out);
  return out;
}

inline double sqrt(double x) { return std::sqrt(x); }
inline Var sqrt(const Var& x) {
  const double s = std::sqrt(x.value());
  if (s == 0.0) {
    Var out = Var::unary(x, s, 0.0);
    mark_kink(out);
    return out;
  }
  return Var::unary(x, s, 0.5 / s);
}

inline double sin(double x) { return std::sin(x); }
inline Var sin(const Var& x) {
  return Var::unary(x, std::sin(x.value()), std::cos(x.value()));
}

inline double cos(double x) { return std::cos(x); }
inline Var cos(const Var& x) {
  return Var::unary(x, std::cos(x.value()), -std::sin(x.value()));
}

inline double abs(double x) { return std::fabs(x); }
inline Var abs(const Var& x) {
  const double v = x.value();
  if (v == 0.0) {
    Var out = Var::unary(x, 0.0, 0.0);
    mark_kink(out);
    return out;
  }
  return Var::unary(x, std::fabs(v), v > 0.0 ? 1.0 : -1.0);
}

inline double atan2(double y, double x) { return std::atan2(y, x); }
inline Var atan2(const Var& y, const Var& x) {
  const double r2 = x.value() * x.value() + y.value() * y.value();
  if (r2 == 0.0) {
    Var out = Var::binary(y, x, 0.0, 0.0, 0.0);
    mark_kink(out);
    return out;
  }
  return Var::binary(y, x, std::atan2(y.value(), x.value()), x.value() / r2,
                     -y.value() / r2);
}

// Angle of (x, |y|) from the positive x axis, negated when y < 0.
// This is the unsigned angle followed by the sign lookup on y; it differs
// from std::atan2 only for y == -0.0, which stays positive here.
inline double signed_angle(double y, double x) {
  const double a = std::atan2(std::fabs(y), x);
  return y < 0.0 ? -a : a;
}
inline Var signed_angle(const Var& y, const Var& x) {
  const double r2 = x.value() * x.value() + y.value() * y.value();
  const double value = signed_angle(y.value(), x.value());
  if (r2 == 0.0) {
    Var out = Var::binary(y, x, value, 0.0, 0.0);
    mark_kink(out);
    return out;
  }
  return Var::binary(y, x, value, x.value() / r2, -y.value() / r2);
}

// Clamped arccos. The derivative is evaluated at the argument clamped into
// [-1 + 1e-12, 1 - 1e-12]; clamping marks a kink.
inline constexpr double kAcosGuard = 1e-12;
inline double acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }
inline Var acos(const Var& x) {
  const double v = x.value();
  const double clamped = std::clamp(v, -1.0, 1.0);
  const double guarded = std::clamp(v, -1.0 + kAcosGuard, 1.0 - kAcosGuard);
  Var out = Var::unary(x, std::acos(clamped),
                       v == clamped ? -1.0 / std::sqrt(1.0 - guarded * guarded)
                                    : 0.0);
  if (v != guarded) {
    mark_kink(out);
  }
  return out;
}

}  // namespace bmc::math
