#pragma once

// Fixed-size convex polygon on the (flexion, abduction) plane that bounds
// the feasible angle pairs of one finger bone, and the containment-gated
// distance used by the angle loss.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "bmc/joint_angles.hpp"

namespace bmc {

class AngleHull {
 public:
  static constexpr int kSize = 10;
  using Vertices = std::array<AnglePair, kSize>;

  // Empty placeholder (all vertices at the origin). Only hulls from
  // from_vertices() or build_hull() are meaningful.
  AngleHull() = default;

  // Throws InvalidHull unless the vertices are finite, counter-clockwise,
  // convex (collinear vertices allowed) and have no zero-length edges.
  static AngleHull from_vertices(const Vertices& vertices);

  const Vertices& vertices() const { return vertices_; }
  const AnglePair& operator[](int k) const {
    return vertices_[static_cast<std::size_t>(k % kSize)];
  }
  double area() const;

  bool operator==(const AngleHull&) const = default;

 private:
  explicit AngleHull(const Vertices& v) : vertices_(v) {}
  Vertices vertices_{};
};

struct HullOptions {
  // Ramer-Douglas-Peucker tolerance, radians.
  double rdp_tolerance = 0.01;
};

// Exact convex hull (CCW, no collinear vertices). Exposed for tests and
// diagnostics.
std::vector<AnglePair> convex_hull(std::span<const AnglePair> points);

// Builds the 10-vertex approximation:
//   1. exact convex hull of the points;
//   2. Ramer-Douglas-Peucker simplification of the closed hull;
//   3. every simplified edge is pushed out to the parallel supporting line
//      of the exact hull, so the polygon still encloses every point;
//   4. while more than 10 edges remain, the edge whose removal adds the
//      least area is dropped (neighbouring edges extended to meet), ties
//      broken by smallest index;
//   5. fewer than 10 vertices are padded with midpoints of the longest edge.
// Every input point is inside the result up to floating-point round-off.
// Throws InsufficientPoints (< 10 points) or DegenerateDistribution
// (collinear within kEpsilon).
AngleHull build_hull(std::span<const AnglePair> points, const HullOptions& options = {});

// Point inside or on the boundary: (w_k x v_k) <= 0 for every edge.
bool contains(const AngleHull& hull, const AnglePair& point);

namespace detail {

inline double cross2(double ax, double ay, double bx, double by) {
  return ax * by - ay * bx;
}

}  // namespace detail

// Minimum over edges of the distance to the clamped edge projection,
// measured as |cos(theta) - cos(p)| + |sin(theta) - sin(p)| summed over
// both coordinates.
template <typename T>
T hull_distance_t(const AngleHull& hull, const AnglePairT<T>& point) {
  T best(0.0);
  double best_f = 0.0;
  double best_a = 0.0;
  bool have = false;
  bool tie = false;
  for (int k = 0; k < AngleHull::kSize; ++k) {
    const AnglePair& h0 = hull[k];
    const AnglePair& h1 = hull[k + 1];
    const double vf = h1.flexion - h0.flexion;
    const double va = h1.abduction - h0.abduction;
    const double len2 = vf * vf + va * va;
    const T wf = point.flexion - T(h0.flexion);
    const T wa = point.abduction - T(h0.abduction);
    const T raw = (wf * vf + wa * va) / len2;
    T t;
    if (raw < T(0.0)) {
      t = T(0.0);
    } else if (raw > T(1.0)) {
      t = T(1.0);
    } else if (math::value_of(raw) == 0.0) {
      t = math::kink_zero(raw);
    } else if (math::value_of(raw) == 1.0) {
      t = T(1.0) + math::kink_zero(raw);
    } else {
      t = raw;
    }
    // Clamped projections use the vertex itself so both edges sharing it
    // report the same point.
    const bool at_end = raw > T(1.0);
    const T pf = at_end ? T(h1.flexion) : T(h0.flexion) + t * vf;
    const T pa = at_end ? T(h1.abduction) : T(h0.abduction) + t * va;
    const T d = math::abs(math::cos(point.flexion) - math::cos(pf)) +
                math::abs(math::sin(point.flexion) - math::sin(pf)) +
                math::abs(math::cos(point.abduction) - math::cos(pa)) +
                math::abs(math::sin(point.abduction) - math::sin(pa));
    if (!have || d < best) {
      best = d;
      best_f = math::value_of(pf);
      best_a = math::value_of(pa);
      have = true;
      tie = false;
    } else if (math::value_of(d) == math::value_of(best) &&
               (math::value_of(pf) != best_f || math::value_of(pa) != best_a)) {
      // Equal distance to the same boundary point (a shared vertex) is
      // smooth; only distinct nearest points make a kink.
      tie = true;
    }
  }
  if (tie) {
    math::mark_kink(best);
  }
  return best;
}

// Zero for contained points, hull distance otherwise. On the boundary the
// zero is a kink. Points within a few ulps of an edge line count as on the
// boundary: there the signs inside the distance are round-off and the
// subgradient would point anywhere.
template <typename T>
T angle_loss_term_t(const AngleHull& hull, const AnglePairT<T>& point) {
  const double f = math::value_of(point.flexion);
  const double a = math::value_of(point.abduction);
  bool on_boundary = false;
  for (int k = 0; k < AngleHull::kSize; ++k) {
    const AnglePair& h0 = hull[k];
    const AnglePair& h1 = hull[k + 1];
    const double ef = h1.flexion - h0.flexion;
    const double ea = h1.abduction - h0.abduction;
    const double c = detail::cross2(f - h0.flexion, a - h0.abduction, ef, ea);
    const double magnitude = std::max({std::fabs(f), std::fabs(a), std::fabs(h0.flexion),
                                       std::fabs(h0.abduction), 1.0});
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() * magnitude *
                         std::hypot(ef, ea);
    if (c > slack) {
      return hull_distance_t(hull, point);
    }
    if (c >= -slack) {
      on_boundary = true;
    }
  }
  if (on_boundary) {
    return math::kink_zero(point.flexion + point.abduction);
  }
  return T(0.0);
}

double hull_distance(const AngleHull& hull, const AnglePair& point);
double angle_loss_term(const AngleHull& hull, const AnglePair& point);

}  // namespace bmc
