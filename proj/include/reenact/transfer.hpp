#pragma once

#include <array>
#include <functional>
#include <span>

#include "reenact/image.hpp"
#include "reenact/landmark_core.hpp"
#include "reenact/matcher.hpp"
#include "reenact/shape.hpp"

namespace reenact::transfer {

/// Weights of the selections anchored before (beta1) and after (beta2) a frame.
struct BlendWeights {
  double beta1 = 1.0;
  double beta2 = 0.0;
};

/// Linear in the position of `t` between the two anchors; (0, 1) when they coincide.
BlendWeights compute_betas(int t, int prev_center, int next_center);

/// The two selections bracketing a target frame, with their anchor frames.
struct Bracket {
  std::size_t before = 0;
  std::size_t after = 0;
  int prev_center = 0;
  int next_center = 0;
  BlendWeights betas;
};

/// Anchors are the assignments' central timestamps. Outside the first/last anchor
/// both sides refer to the nearest selection.
Bracket bracket_frame(int t, std::span<const matching::MatchAssignment> assignments);

struct ShapeWeights {
  std::array<double, 3> alpha{0.1, 0.8, 0.1};
  double w_nr = 0.6;
  double w_r = 0.4;
};

/// alpha-weighted temporal average of target shapes around t; missing neighbours
/// at the sequence ends are replaced by frame t.
LandmarkPoints smoothed_target(int t, std::span<const LandmarkShape> target_shapes,
                               const std::array<double, 3>& alpha);

/// beta-weighted blend of both source shapes, each mapped onto target[t] by its
/// own least-squares affine fit.
LandmarkPoints aligned_source_blend(int t, std::span<const LandmarkShape> target_shapes,
                                    const LandmarkShape& source_before,
                                    const LandmarkShape& source_after, const BlendWeights& betas);

/// Closed-form minimizer of w_nr * E_nr + w_r * E_r: per landmark the convex
/// combination w_nr * a + w_r * b of the two quadratic targets.
LandmarkShape reenact_shape(int t, std::span<const LandmarkShape> target_shapes,
                            const LandmarkShape& source_before, const LandmarkShape& source_after,
                            const BlendWeights& betas, const ShapeWeights& weights);

/// Total warping energy of a candidate shape (used by tests and diagnostics).
double warping_energy(const LandmarkPoints& candidate, const LandmarkPoints& nonrigid_target,
                      const LandmarkPoints& affine_target, double w_nr, double w_r);

/// Visits every canvas pixel covered by a non-degenerate destination triangle
/// once (first triangle wins on shared edges), passing the barycentric-equivalent
/// source position. Returns the number of degenerate triangles skipped.
int rasterize_mesh(const LandmarkPoints& src_shape, const LandmarkPoints& dst_shape,
                   const landmarks::TriangleMesh& mesh, int width, int height,
                   const std::function<void(int x, int y, const Point2& source)>& visit);

struct FloatWarp {
  FloatImage image;
  BinaryMask coverage;
  int skipped_triangles = 0;
};

struct Warp {
  ImageBuffer image;
  BinaryMask coverage;
  int skipped_triangles = 0;
};

/// Inverse-warps `src` triangle by triangle onto `dst_shape` in a `width` x `height`
/// canvas, with bilinear source sampling. Unquantized.
FloatWarp piecewise_affine_warp_float(const ImageBuffer& src, const LandmarkPoints& src_shape,
                                      const LandmarkPoints& dst_shape,
                                      const landmarks::TriangleMesh& mesh, int width, int height);

Warp piecewise_affine_warp(const ImageBuffer& src, const LandmarkPoints& src_shape,
                           const LandmarkPoints& dst_shape, const landmarks::TriangleMesh& mesh,
                           int width, int height);

/// beta-blend of both sources warped onto the reenactment shape; coverage is the
/// intersection of both warps. A zero-weight source is not sampled.
Warp transfer_appearance(const ImageBuffer& source_before, const LandmarkShape& shape_before,
                         const ImageBuffer& source_after, const LandmarkShape& shape_after,
                         const LandmarkShape& reenact, const BlendWeights& betas,
                         const landmarks::TriangleMesh& mesh, int width, int height);

}  // namespace reenact::transfer
