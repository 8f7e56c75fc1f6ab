#include <algorithm>
#include <cmath>
#include <iostream>

#include "reenact/error.hpp"
#include "reenact/transfer.hpp"

namespace reenact::transfer {

namespace {

constexpr double kInsideTolerance = 1e-9;
constexpr double kMinTriangleArea = 1e-9;

}  // namespace

int rasterize_mesh(const LandmarkPoints& src_shape, const LandmarkPoints& dst_shape,
                   const landmarks::TriangleMesh& mesh, int width, int height,
                   const std::function<void(int x, int y, const Point2& source)>& visit) {
  BinaryMask visited(width, height);
  int skipped = 0;
  for (const auto& tri : mesh.triangles) {
    const Point2& d0 = dst_shape[tri[0]];
    const Point2& d1 = dst_shape[tri[1]];
    const Point2& d2 = dst_shape[tri[2]];
    const Point2 e1 = d1 - d0;
    const Point2 e2 = d2 - d0;
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    if (!(std::abs(det) > kMinTriangleArea)) {
      ++skipped;
      continue;
    }
    const Point2& s0 = src_shape[tri[0]];
    const Point2& s1 = src_shape[tri[1]];
    const Point2& s2 = src_shape[tri[2]];

    const int x_lo = std::max(0, static_cast<int>(std::floor(std::min({d0.x(), d1.x(), d2.x()}))));
    const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(std::max({d0.x(), d1.x(), d2.x()}))));
    const int y_lo = std::max(0, static_cast<int>(std::floor(std::min({d0.y(), d1.y(), d2.y()}))));
    const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(std::max({d0.y(), d1.y(), d2.y()}))));
    for (int y = y_lo; y <= y_hi; ++y) {
      for (int x = x_lo; x <= x_hi; ++x) {
        if (visited.get(x, y)) continue;
        const Point2 r = Point2(x, y) - d0;
        const double l1 = (r.x() * e2.y() - r.y() * e2.x()) / det;
        const double l2 = (e1.x() * r.y() - e1.y() * r.x()) / det;
        const double l0 = 1.0 - l1 - l2;
        if (l0 < -kInsideTolerance || l1 < -kInsideTolerance || l2 < -kInsideTolerance) continue;
        visited.set(x, y, true);
        visit(x, y, l0 * s0 + l1 * s1 + l2 * s2);
      }
    }
  }
  if (skipped > 0) {
    std::cerr << "warning: piecewise affine warp skipped " << skipped
              << " degenerate triangle(s)\n";
  }
  return skipped;
}

FloatWarp piecewise_affine_warp_float(const ImageBuffer& src, const LandmarkPoints& src_shape,
                                      const LandmarkPoints& dst_shape,
                                      const landmarks::TriangleMesh& mesh, int width, int height) {
  FloatWarp out{FloatImage(width, height, src.channels()), BinaryMask(width, height), 0};
  out.skipped_triangles =
      rasterize_mesh(src_shape, dst_shape, mesh, width, height, [&](int x, int y, const Point2& s) {
        for (int c = 0; c < src.channels(); ++c) {
          out.image.at(x, y, c) = sample_bilinear(src, s.x(), s.y(), c);
        }
        out.coverage.set(x, y, true);
      });
  return out;
}

Warp piecewise_affine_warp(const ImageBuffer& src, const LandmarkPoints& src_shape,
                           const LandmarkPoints& dst_shape, const landmarks::TriangleMesh& mesh,
                           int width, int height) {
  auto warped = piecewise_affine_warp_float(src, src_shape, dst_shape, mesh, width, height);
  return {quantize(warped.image), std::move(warped.coverage), warped.skipped_triangles};
}

Warp transfer_appearance(const ImageBuffer& source_before, const LandmarkShape& shape_before,
                         const ImageBuffer& source_after, const LandmarkShape& shape_after,
                         const LandmarkShape& reenact, const BlendWeights& betas,
                         const landmarks::TriangleMesh& mesh, int width, int height) {
  if (source_before.channels() != source_after.channels()) {
    throw Error(ErrorKind::DimensionMismatch, "source frames differ in channel count");
  }
  if (betas.beta2 == 0.0) {
    return piecewise_affine_warp(source_before, shape_before.points, reenact.points, mesh, width,
                                 height);
  }
  if (betas.beta1 == 0.0) {
    return piecewise_affine_warp(source_after, shape_after.points, reenact.points, mesh, width,
                                 height);
  }
  const auto a = piecewise_affine_warp_float(source_before, shape_before.points, reenact.points,
                                             mesh, width, height);
  const auto b = piecewise_affine_warp_float(source_after, shape_after.points, reenact.points,
                                             mesh, width, height);
  FloatImage blend(width, height, source_before.channels());
  auto out = blend.data();
  auto pa = a.image.data();
  auto pb = b.image.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = betas.beta1 * pa[i] + betas.beta2 * pb[i];
  return {quantize(blend), a.coverage & b.coverage,
          std::max(a.skipped_triangles, b.skipped_triangles)};
}

}  // namespace reenact::transfer
