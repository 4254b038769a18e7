#include "bmc/angle_hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bmc {

namespace {

using detail::cross2;

struct P {
  double x;
  double y;
};

P to_p(const AnglePair& a) { return {a.flexion, a.abduction}; }
AnglePair to_pair(const P& p) { return {p.x, p.y}; }

P sub(const P& a, const P& b) { return {a.x - b.x, a.y - b.y}; }
double cross(const P& a, const P& b) { return cross2(a.x, a.y, b.x, b.y); }
double length(const P& a) { return std::hypot(a.x, a.y); }

// Turn of o->a->b; positive for a left (CCW) turn.
double turn(const P& o, const P& a, const P& b) { return cross(sub(a, o), sub(b, o)); }

// Distance of p from the infinite line through a and b.
double line_distance(const P& p, const P& a, const P& b) {
  const P d = sub(b, a);
  const double len = length(d);
  if (len == 0.0) {
    return length(sub(p, a));
  }
  return std::fabs(cross(d, sub(p, a))) / len;
}

// Ramer-Douglas-Peucker on hull[i..j] (indices modulo n). The top-level
// call on each half always keeps its farthest vertex so the result stays a
// proper polygon however small the hull is.
void rdp(const std::vector<P>& hull, std::size_t i, std::size_t j, double tolerance,
         bool force, std::vector<std::size_t>& kept) {
  if (j - i < 2) {
    return;
  }
  const std::size_t n = hull.size();
  const P& a = hull[i % n];
  const P& b = hull[j % n];
  std::size_t far = i + 1;
  double far_dist = -1.0;
  for (std::size_t m = i + 1; m < j; ++m) {
    const double d = line_distance(hull[m % n], a, b);
    if (d > far_dist) {
      far_dist = d;
      far = m;
    }
  }
  if (!force && far_dist <= tolerance) {
    return;
  }
  rdp(hull, i, far, tolerance, false, kept);
  kept.push_back(far % n);
  rdp(hull, far, j, tolerance, false, kept);
}

// Indices of the simplified closed hull, CCW.
std::vector<std::size_t> simplify_closed(const std::vector<P>& hull, double tolerance) {
  const std::size_t n = hull.size();
  std::size_t far = 0;
  double far_dist = -1.0;
  for (std::size_t m = 1; m < n; ++m) {
    const double d = length(sub(hull[m], hull[0]));
    if (d > far_dist) {
      far_dist = d;
      far = m;
    }
  }
  std::vector<std::size_t> kept{0};
  rdp(hull, 0, far, tolerance, true, kept);
  kept.push_back(far);
  rdp(hull, far, n, tolerance, true, kept);
  return kept;
}

// Line through `anchor` with direction `dir`; polygon interior on the left.
struct Line {
  P anchor;
  P dir;
  bool offset;  // false: passes through the simplified edge's endpoints
};

P intersect(const Line& l1, const Line& l2) {
  const double denom = cross(l1.dir, l2.dir);
  const double s = cross(sub(l2.anchor, l1.anchor), l2.dir) / denom;
  return {l1.anchor.x + s * l1.dir.x, l1.anchor.y + s * l1.dir.y};
}

double width(const std::vector<P>& hull) {
  const std::size_t n = hull.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const P& a = hull[k];
    const P& b = hull[(k + 1) % n];
    double far = 0.0;
    for (const P& p : hull) {
      far = std::max(far, line_distance(p, a, b));
    }
    best = std::min(best, far);
  }
  return best;
}

double polygon_area(const std::vector<P>& poly) {
  double twice = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    twice += cross(poly[k], poly[(k + 1) % poly.size()]);
  }
  return 0.5 * twice;
}

}  // namespace

AngleHull AngleHull::from_vertices(const Vertices& vertices) {
  std::vector<P> poly;
  for (int k = 0; k < kSize; ++k) {
    const AnglePair& v = vertices[static_cast<std::size_t>(k)];
    if (!std::isfinite(v.flexion) || !std::isfinite(v.abduction)) {
      throw Error(ErrorKind::InvalidHull, "non-finite hull vertex", k);
    }
    poly.push_back(to_p(v));
  }
  double total_turn = 0.0;
  for (int k = 0; k < kSize; ++k) {
    const P& a = poly[static_cast<std::size_t>(k)];
    const P& b = poly[static_cast<std::size_t>((k + 1) % kSize)];
    const P& c = poly[static_cast<std::size_t>((k + 2) % kSize)];
    const P e1 = sub(b, a);
    const P e2 = sub(c, b);
    const double l1 = length(e1);
    const double l2 = length(e2);
    if (l1 == 0.0) {
      throw Error(ErrorKind::InvalidHull, "zero-length hull edge", k);
    }
    // Allow for round-off in the coordinates themselves: collinear padding
    // vertices of a tiny hull far from the origin are only collinear up to
    // a few ulps of the coordinate magnitude.
    const double magnitude = std::max({std::fabs(a.x), std::fabs(a.y), std::fabs(b.x),
                                       std::fabs(b.y), std::fabs(c.x), std::fabs(c.y)});
    const double slack = 1e-12 * l1 * l2 +
                         8.0 * std::numeric_limits<double>::epsilon() * magnitude * (l1 + l2);
    if (cross(e1, e2) < -slack) {
      throw Error(ErrorKind::InvalidHull, "hull is not convex counter-clockwise",
                  (k + 1) % kSize);
    }
    total_turn += std::atan2(cross(e1, e2), e1.x * e2.x + e1.y * e2.y);
  }
  if (std::fabs(total_turn - 2.0 * std::numbers::pi) > 1e-6) {
    throw Error(ErrorKind::InvalidHull, "hull vertices do not wind once counter-clockwise");
  }
  return AngleHull(vertices);
}

double AngleHull::area() const {
  std::vector<P> poly;
  for (const AnglePair& v : vertices_) {
    poly.push_back(to_p(v));
  }
  return polygon_area(poly);
}

std::vector<AnglePair> convex_hull(std::span<const AnglePair> points) {
  std::vector<P> pts;
  pts.reserve(points.size());
  for (const AnglePair& a : points) {
    pts.push_back(to_p(a));
  }
  std::sort(pts.begin(), pts.end(),
            [](const P& a, const P& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const P& a, const P& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) {
    std::vector<AnglePair> out;
    for (const P& p : pts) {
      out.push_back(to_pair(p));
    }
    return out;
  }
  // Andrew's monotone chain.
  std::vector<P> hull(2 * pts.size());
  std::size_t k = 0;
  for (const P& p : pts) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0.0) {
      --k;
    }
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) {
      --k;
    }
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  std::vector<AnglePair> out;
  out.reserve(hull.size());
  for (const P& p : hull) {
    out.push_back(to_pair(p));
  }
  return out;
}

AngleHull build_hull(std::span<const AnglePair> points, const HullOptions& options) {
  if (points.size() < static_cast<std::size_t>(AngleHull::kSize)) {
    throw Error(ErrorKind::InsufficientPoints,
                "need at least 10 angle points, got " + std::to_string(points.size()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].flexion) || !std::isfinite(points[i].abduction)) {
      throw Error(ErrorKind::InvalidArgument, "non-finite angle point",
                  static_cast<int>(i));
    }
  }
  std::vector<P> hull;
  for (const AnglePair& a : convex_hull(points)) {
    hull.push_back(to_p(a));
  }
  if (hull.size() < 3 || width(hull) < kEpsilon) {
    throw Error(ErrorKind::DegenerateDistribution, "angle points are collinear");
  }

  const std::vector<std::size_t> kept = simplify_closed(hull, options.rdp_tolerance);
  const std::size_t n_hull = hull.size();

  // Supporting line of the exact hull parallel to each simplified edge.
  std::vector<Line> lines;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t i = kept[k];
    const std::size_t j = k + 1 < kept.size() ? kept[k + 1] : kept[0] + n_hull;
    const P& a = hull[i];
    const P dir = sub(hull[j % n_hull], a);
    const double len = length(dir);
    const P outward{dir.y / len, -dir.x / len};
    double best = 0.0;
    P anchor = a;
    bool offset = false;
    for (std::size_t m = i + 1; m < j; ++m) {
      const P& p = hull[m % n_hull];
      const double d = outward.x * (p.x - a.x) + outward.y * (p.y - a.y);
      if (d > best) {
        best = d;
        anchor = p;
        offset = true;
      }
    }
    lines.push_back(Line{anchor, dir, offset});
  }

  // vertex k joins line k-1 and line k.
  std::vector<P> verts(lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const Line& prev = lines[(k + lines.size() - 1) % lines.size()];
    const Line& cur = lines[k];
    verts[k] = (!prev.offset && !cur.offset) ? hull[kept[k]] : intersect(prev, cur);
  }

  // Greedy edge elimination: the polygon only grows, so nothing inside
  // is lost; pick the edge whose removal adds the least area.
  while (lines.size() > static_cast<std::size_t>(AngleHull::kSize)) {
    const std::size_t n = lines.size();
    std::size_t best_k = n;
    double best_area = std::numeric_limits<double>::infinity();
    P best_q{};
    for (std::size_t k = 0; k < n; ++k) {
      const Line& prev = lines[(k + n - 1) % n];
      const Line& next = lines[(k + 1) % n];
      const double c = cross(prev.dir, next.dir);
      if (!(c > 1e-12 * length(prev.dir) * length(next.dir))) {
        continue;  // neighbours would not meet on the outer side
      }
      const P q = intersect(prev, next);
      const P& v0 = verts[k];
      const P& v1 = verts[(k + 1) % n];
      const double added = 0.5 * std::fabs(cross(sub(q, v0), sub(v1, v0)));
      if (added < best_area) {
        best_area = added;
        best_k = k;
        best_q = q;
      }
    }
    if (best_k == n) {
      throw Error(ErrorKind::DegenerateDistribution, "hull cannot be reduced to 10 edges");
    }
    verts[best_k] = best_q;
    lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(best_k));
    if (best_k + 1 < n) {
      verts.erase(verts.begin() + static_cast<std::ptrdiff_t>(best_k + 1));
    } else {
      // Dropped the last edge: the merged vertex now joins the last and
      // first lines, so it becomes vertex 0.
      verts.erase(verts.begin());
      std::rotate(verts.begin(), verts.end() - 1, verts.end());
    }
  }

  while (verts.size() < static_cast<std::size_t>(AngleHull::kSize)) {
    std::size_t longest = 0;
    double longest_len = -1.0;
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const double len = length(sub(verts[(k + 1) % verts.size()], verts[k]));
      if (len > longest_len) {
        longest_len = len;
        longest = k;
      }
    }
    const P& a = verts[longest];
    const P& b = verts[(longest + 1) % verts.size()];
    const P mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    verts.insert(verts.begin() + static_cast<std::ptrdiff_t>(longest + 1), mid);
  }

  AngleHull::Vertices out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = to_pair(verts[k]);
  }
  return AngleHull::from_vertices(out);
}

bool contains(const AngleHull& hull, const AnglePair& point) {
  for (int k = 0; k < AngleHull::kSize; ++k) {
    const AnglePair& h0 = hull[k];
    const AnglePair& h1 = hull[k + 1];
    const double c = cross2(point.flexion - h0.flexion, point.abduction - h0.abduction,
                            h1.flexion - h0.flexion, h1.abduction - h0.abduction);
    if (c > 0.0) {
      return false;
    }
  }
  return true;
}

double hull_distance(const AngleHull& hull, const AnglePair& point) {
  return hull_distance_t(hull, AnglePairT<double>{point.flexion, point.abduction});
}

double angle_loss_term(const AngleHull& hull, const AnglePair& point) {
  return angle_loss_term_t(hull, AnglePairT<double>{point.flexion, point.abduction});
}

}  // namespace bmc
