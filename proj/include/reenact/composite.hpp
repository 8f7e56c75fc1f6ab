#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "reenact/image.hpp"
#include "reenact/landmark_core.hpp"
#include "reenact/shape.hpp"

namespace reenact::composite {

/// Convex hull in counterclockwise order (positive orientation), collinear points dropped.
std::vector<Point2> convex_hull(std::span<const Point2> points);

/// Pixels whose centres lie inside or on the convex hull of `points`.
BinaryMask fill_convex_hull(std::span<const Point2> points, int width, int height);

/// Union of hull(eyes + brows + nose) and hull(nose + mouth + chin); both share
/// the nose, so the result is one connected region.
BinaryMask feature_region(const LandmarkShape& shape, const LandmarkGroups& groups, int width,
                          int height);

/// Union of the individual hulls of both eyes, the nose and the mouth. Erosion
/// never removes these pixels.
BinaryMask protected_region(const LandmarkShape& shape, const LandmarkGroups& groups, int width,
                            int height);

/// Separable normalized Gaussian blur of a binary mask (kernel radius ceil(3 sigma),
/// replicated border). Returns values in [0, 1], row-major.
std::vector<double> gaussian_alpha(const BinaryMask& mask, double sigma);

/// Keeps pixels whose blurred value is >= threshold, plus every `keep` pixel.
BinaryMask gaussian_erode(const BinaryMask& mask, double sigma, double threshold,
                          const BinaryMask* keep = nullptr);

inline constexpr double kErosionThreshold = 0.99;

/// Feature mask of a face at rest, softly eroded and constrained by the landmarks.
/// Throws Error(ErosionTooAggressive) if nothing survives.
BinaryMask build_source_mask(const LandmarkShape& shape, const LandmarkGroups& groups, int width,
                             int height, double erosion_sigma = 5.0);

/// Inverse-warps a mask onto `dst_shape` with nearest-neighbour sampling.
BinaryMask transfer_mask(const BinaryMask& src_mask, const LandmarkPoints& src_shape,
                         const LandmarkPoints& dst_shape, const landmarks::TriangleMesh& mesh,
                         int width, int height);

/// Intersects `mask` with the target's own feature mask.
/// Throws Error(DegenerateOverlap) when the intersection is empty.
BinaryMask clip_to_target(const BinaryMask& mask, const LandmarkShape& target_shape,
                          const LandmarkGroups& groups, double erosion_sigma = 5.0);

/// Matrix, log, matrix colour space: p = perceptual * ln(max(to_cone * rgb, 1/255)),
/// with rgb scaled to [0, 1].
struct ColorTransform {
  Eigen::Matrix3d to_cone;
  Eigen::Matrix3d cone_to_perceptual;

  static ColorTransform defaults();
  /// Two 3x3 row-major matrices as 18 whitespace-separated numbers ('#' comments allowed).
  static ColorTransform load(const std::filesystem::path& file);
};

inline constexpr double kConeFloor = 1.0 / 255.0;

/// 3-channel float image in the working colour space.
using PerceptualImage = FloatImage;

PerceptualImage rgb_to_perceptual(const ImageBuffer& rgb, const ColorTransform& transform);
/// Back to RGB on a [0, 255] scale, unquantized.
FloatImage perceptual_to_rgb(const PerceptualImage& image, const ColorTransform& transform);

struct PoissonOptions {
  double tolerance = 1e-6;  // required ||Ax - b||_inf
  /// 2-norm residual the iteration aims for; well below `tolerance` so the
  /// solution itself is accurate, not just the residual.
  double target_residual = 1e-11;
  int max_iterations = 10000;
};

struct PoissonResult {
  PerceptualImage image;
  double residual = 0.0;  // worst channel ||Ax - b||_inf
  int iterations = 0;     // worst channel
};

/// Seamless cloning: inside `mask` solve the 5-point Poisson equation with the
/// gradients of `src` as guidance and `dst` as Dirichlet boundary; outside copy `dst`.
/// Throws Error(BorderContact) if the mask touches the image border and
/// Error(SolverFailure) if the residual tolerance is not met.
PoissonResult poisson_clone(const FloatImage& src, const FloatImage& dst, const BinaryMask& mask,
                            const PoissonOptions& options = {});

/// alpha = Gaussian-blurred mask; out = alpha * composited + (1 - alpha) * target.
FloatImage feather_seam_float(const FloatImage& composited, const ImageBuffer& target,
                              const BinaryMask& mask, double sigma);
ImageBuffer feather_seam(const FloatImage& composited, const ImageBuffer& target,
                         const BinaryMask& mask, double sigma);

}  // namespace reenact::composite
