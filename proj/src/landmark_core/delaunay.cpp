#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "reenact/error.hpp"
#include "reenact/landmark_core.hpp"

namespace reenact::landmarks {

namespace {

using Triangle = std::array<int, 3>;

struct Predicates {
  const LandmarkPoints& pts;
  long double orient_eps;
  long double circle_eps;

  long double orient(int a, int b, int c) const {
    const long double ax = pts[a].x(), ay = pts[a].y();
    const long double bx = pts[b].x(), by = pts[b].y();
    const long double cx = pts[c].x(), cy = pts[c].y();
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  }

  int orient_sign(int a, int b, int c) const {
    const long double o = orient(a, b, c);
    if (o > orient_eps) return 1;
    if (o < -orient_eps) return -1;
    return 0;
  }

  // > 0 when d lies strictly inside the circumcircle of the positively oriented (a, b, c).
  long double in_circle(int a, int b, int c, int d) const {
    const long double dx = pts[d].x(), dy = pts[d].y();
    const long double adx = pts[a].x() - dx, ady = pts[a].y() - dy;
    const long double bdx = pts[b].x() - dx, bdy = pts[b].y() - dy;
    const long double cdx = pts[c].x() - dx, cdy = pts[c].y() - dy;
    const long double ad = adx * adx + ady * ady;
    const long double bd = bdx * bdx + bdy * bdy;
    const long double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
  }
};

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

/// Sweep in (x, y) order, fanning each new point to the hull edges it sees.
std::vector<Triangle> sweep_triangulation(const Predicates& pred, std::vector<int> order) {
  const auto& pts = pred.pts;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    return pts[a].y() < pts[b].y();
  });

  // Leading collinear run becomes a degenerate polygon walked forth and back.
  std::size_t first_off_line = 2;
  while (first_off_line < order.size() &&
         pred.orient_sign(order[0], order[1], order[first_off_line]) == 0) {
    ++first_off_line;
  }
  if (first_off_line == order.size()) {
    throw Error(ErrorKind::Triangulation, "all landmarks are collinear");
  }
  std::vector<int> hull(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first_off_line));
  for (std::size_t i = first_off_line - 1; i-- > 1;) hull.push_back(order[i]);

  std::vector<Triangle> triangles;
  for (std::size_t k = first_off_line; k < order.size(); ++k) {
    const int p = order[k];
    const std::size_t n = hull.size();
    std::vector<bool> visible(n);
    for (std::size_t i = 0; i < n; ++i) {
      visible[i] = pred.orient_sign(hull[i], hull[(i + 1) % n], p) < 0;
    }
    // Rotate so the visible run starts at index 0 and does not wrap.
    std::size_t start = 0;
    while (start < n && !(visible[start] && !visible[(start + n - 1) % n])) ++start;
    if (start == n) {
      throw Error(ErrorKind::Triangulation,
                  "landmark " + std::to_string(p) + " is not outside the partial hull");
    }
    std::rotate(hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(start), hull.end());
    std::rotate(visible.begin(), visible.begin() + static_cast<std::ptrdiff_t>(start), visible.end());
    std::size_t run = 0;
    while (run < n && visible[run]) ++run;
    for (std::size_t i = 0; i < run; ++i) {
      triangles.push_back({hull[(i + 1) % n], hull[i], p});
    }
    // Replace interior vertices of the visible chain with p.
    std::vector<int> next;
    next.reserve(n + 1);
    next.push_back(hull[0]);
    next.push_back(p);
    for (std::size_t i = run; i < n; ++i) {
      if (i == 0) continue;
      next.push_back(hull[i]);
    }
    hull = std::move(next);
  }
  return triangles;
}

/// Lawson flips until every interior edge is locally Delaunay.
void flip_to_delaunay(const Predicates& pred, std::vector<Triangle>& triangles) {
  for (std::size_t pass = 0;; ++pass) {
    if (pass > 10000) throw Error(ErrorKind::Triangulation, "edge flipping did not converge");
    std::map<std::pair<int, int>, std::vector<std::size_t>> edges;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
      for (int e = 0; e < 3; ++e) {
        edges[edge_key(triangles[t][e], triangles[t][(e + 1) % 3])].push_back(t);
      }
    }
    bool flipped = false;
    std::vector<bool> touched(triangles.size(), false);
    for (const auto& [key, owners] : edges) {
      if (owners.size() != 2 || touched[owners[0]] || touched[owners[1]]) continue;
      const Triangle& t0 = triangles[owners[0]];
      const Triangle& t1 = triangles[owners[1]];
      auto opposite = [&](const Triangle& t) {
        for (int v : t) {
          if (v != key.first && v != key.second) return v;
        }
        return -1;
      };
      const int c = opposite(t0);
      const int d = opposite(t1);
      if (!(pred.in_circle(t0[0], t0[1], t0[2], d) > pred.circle_eps)) continue;
      // Rebuild from the quad (a, d, b, c) around the shared edge a-b of t0 = (a, b, c).
      int a = -1;
      int b = -1;
      for (int e = 0; e < 3; ++e) {
        if (t0[(e + 2) % 3] == c) {
          a = t0[e];
          b = t0[(e + 1) % 3];
        }
      }
      const Triangle n0{a, d, c};
      const Triangle n1{d, b, c};
      if (pred.orient_sign(n0[0], n0[1], n0[2]) <= 0 || pred.orient_sign(n1[0], n1[1], n1[2]) <= 0) {
        continue;  // non-convex quad; edge stays
      }
      triangles[owners[0]] = n0;
      triangles[owners[1]] = n1;
      touched[owners[0]] = touched[owners[1]] = true;
      flipped = true;
    }
    if (!flipped) return;
  }
}

}  // namespace

TriangleMesh triangulate_reference(const LandmarkShape& reference) {
  const auto& pts = reference.points;
  if (!reference.all_finite()) throw Error(ErrorKind::Triangulation, "non-finite landmark");
  double min_x = pts[0].x(), max_x = min_x, min_y = pts[0].y(), max_y = min_y;
  for (const auto& p : pts) {
    min_x = std::min(min_x, p.x());
    max_x = std::max(max_x, p.x());
    min_y = std::min(min_y, p.y());
    max_y = std::max(max_y, p.y());
  }
  const double extent = std::max({max_x - min_x, max_y - min_y, 1.0});
  for (int i = 0; i < kLandmarkCount; ++i) {
    for (int j = i + 1; j < kLandmarkCount; ++j) {
      if ((pts[i] - pts[j]).norm() <= 1e-9 * extent) {
        throw Error(ErrorKind::Triangulation, "landmarks " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " coincide");
      }
    }
  }
  const long double e2 = static_cast<long double>(extent) * extent;
  const Predicates pred{pts, 1e-14L * e2, 1e-14L * e2 * e2};

  std::vector<int> order(kLandmarkCount);
  std::iota(order.begin(), order.end(), 0);
  TriangleMesh mesh;
  mesh.triangles = sweep_triangulation(pred, order);
  flip_to_delaunay(pred, mesh.triangles);
  // Canonical order so the topology is reproducible: rotate each triangle to
  // start at its smallest index, then sort.
  for (auto& t : mesh.triangles) {
    std::rotate(t.begin(), std::min_element(t.begin(), t.end()), t.end());
  }
  std::sort(mesh.triangles.begin(), mesh.triangles.end());
  return mesh;
}

}  // namespace reenact::landmarks
