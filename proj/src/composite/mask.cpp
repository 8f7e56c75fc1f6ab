#include <algorithm>
#include <cmath>

#include "reenact/composite.hpp"
#include "reenact/error.hpp"
#include "reenact/transfer.hpp"

namespace reenact::composite {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

std::vector<int> concat(std::initializer_list<const std::vector<int>*> groups) {
  std::vector<int> out;
  for (const auto* g : groups) out.insert(out.end(), g->begin(), g->end());
  return out;
}

/// Middle third of the outline (the chin), at least one point.
std::vector<int> chin_indices(const std::vector<int>& outline) {
  const std::size_t n = outline.size();
  const std::size_t take = std::max<std::size_t>(1, n / 3);
  const std::size_t first = (n - take) / 2;
  return {outline.begin() + static_cast<std::ptrdiff_t>(first),
          outline.begin() + static_cast<std::ptrdiff_t>(first + take)};
}

}  // namespace

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  // Andrew's monotone chain.
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

BinaryMask fill_convex_hull(std::span<const Point2> points, int width, int height) {
  BinaryMask mask(width, height);
  const auto hull = convex_hull(points);
  if (hull.size() < 3) return mask;
  double min_x = hull[0].x(), max_x = min_x, min_y = hull[0].y(), max_y = min_y;
  for (const auto& p : hull) {
    min_x = std::min(min_x, p.x());
    max_x = std::max(max_x, p.x());
    min_y = std::min(min_y, p.y());
    max_y = std::max(max_y, p.y());
  }
  const int x0 = std::max(0, static_cast<int>(std::ceil(min_x)));
  const int x1 = std::min(width - 1, static_cast<int>(std::floor(max_x)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(min_y)));
  const int y1 = std::min(height - 1, static_cast<int>(std::floor(max_y)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Point2 p(x, y);
      bool inside = true;
      for (std::size_t i = 0; i < hull.size() && inside; ++i) {
        inside = cross(hull[i], hull[(i + 1) % hull.size()], p) >= -1e-9;
      }
      if (inside) mask.set(x, y, true);
    }
  }
  return mask;
}

BinaryMask feature_region(const LandmarkShape& shape, const LandmarkGroups& groups, int width,
                          int height) {
  const auto chin = chin_indices(groups.outline);
  const auto upper = concat({&groups.left_eye, &groups.right_eye, &groups.brows, &groups.nose});
  const auto lower = concat({&groups.nose, &groups.mouth, &chin});
  return fill_convex_hull(gather(shape, upper), width, height) |
         fill_convex_hull(gather(shape, lower), width, height);
}

BinaryMask protected_region(const LandmarkShape& shape, const LandmarkGroups& groups, int width,
                            int height) {
  BinaryMask out(width, height);
  for (const auto* g : {&groups.left_eye, &groups.right_eye, &groups.nose, &groups.mouth}) {
    out = out | fill_convex_hull(gather(shape, *g), width, height);
  }
  return out;
}

std::vector<double> gaussian_alpha(const BinaryMask& mask, double sigma) {
  if (!(sigma > 0)) throw Error(ErrorKind::Config, "Gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-(k * k) / (2.0 * sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    total += w;
  }
  for (double& w : kernel) w /= total;

  const int w = mask.width();
  const int h = mask.height();
  std::vector<double> horizontal(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int xx = std::clamp(x + k, 0, w - 1);
        if (mask.get(xx, y)) acc += kernel[static_cast<std::size_t>(k + radius)];
      }
      horizontal[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  std::vector<double> out(horizontal.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int yy = std::clamp(y + k, 0, h - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               horizontal[static_cast<std::size_t>(yy) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return out;
}

BinaryMask gaussian_erode(const BinaryMask& mask, double sigma, double threshold,
                          const BinaryMask* keep) {
  const auto alpha = gaussian_alpha(mask, sigma);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const bool soft = mask.get(x, y) &&
                        alpha[static_cast<std::size_t>(y) * mask.width() + x] >= threshold;
      out.set(x, y, soft || (keep != nullptr && keep->get(x, y)));
    }
  }
  return out;
}

BinaryMask build_source_mask(const LandmarkShape& shape, const LandmarkGroups& groups, int width,
                             int height, double erosion_sigma) {
  const BinaryMask region = feature_region(shape, groups, width, height);
  const BinaryMask keep = protected_region(shape, groups, width, height);
  BinaryMask eroded = gaussian_erode(region, erosion_sigma, kErosionThreshold, &keep);
  if (eroded.empty_foreground()) {
    throw Error(ErrorKind::ErosionTooAggressive,
                "feature mask is empty after erosion (sigma " + std::to_string(erosion_sigma) + ")");
  }
  return eroded;
}

BinaryMask transfer_mask(const BinaryMask& src_mask, const LandmarkPoints& src_shape,
                         const LandmarkPoints& dst_shape, const landmarks::TriangleMesh& mesh,
                         int width, int height) {
  BinaryMask out(width, height);
  transfer::rasterize_mesh(src_shape, dst_shape, mesh, width, height,
                           [&](int x, int y, const Point2& s) {
                             const int sx = static_cast<int>(std::floor(s.x() + 0.5));
                             const int sy = static_cast<int>(std::floor(s.y() + 0.5));
                             if (src_mask.contains(sx, sy) && src_mask.get(sx, sy)) {
                               out.set(x, y, true);
                             }
                           });
  return out;
}

BinaryMask clip_to_target(const BinaryMask& mask, const LandmarkShape& target_shape,
                          const LandmarkGroups& groups, double erosion_sigma) {
  const BinaryMask target =
      build_source_mask(target_shape, groups, mask.width(), mask.height(), erosion_sigma);
  BinaryMask clipped = mask & target;
  if (clipped.empty_foreground()) {
    throw Error(ErrorKind::DegenerateOverlap, "transferred mask does not overlap the target face");
  }
  return clipped;
}

}  // namespace reenact::composite
