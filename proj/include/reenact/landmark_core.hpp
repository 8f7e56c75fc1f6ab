#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "reenact/image.hpp"
#include "reenact/media_io.hpp"
#include "reenact/shape.hpp"

namespace reenact::landmarks {

/// x' = A x + t, stored as the 2x3 matrix [A | t].
class AffineTransform2D {
 public:
  AffineTransform2D() : matrix_(Eigen::Matrix<double, 2, 3>::Zero()) {
    matrix_(0, 0) = 1.0;
    matrix_(1, 1) = 1.0;
  }
  explicit AffineTransform2D(const Eigen::Matrix<double, 2, 3>& matrix) : matrix_(matrix) {}

  static AffineTransform2D identity() { return {}; }

  Point2 apply(const Point2& p) const { return linear() * p + translation(); }
  Eigen::Matrix2d linear() const { return matrix_.leftCols<2>(); }
  Eigen::Vector2d translation() const { return matrix_.col(2); }
  const Eigen::Matrix<double, 2, 3>& matrix() const noexcept { return matrix_; }
  double determinant() const { return linear().determinant(); }

  /// Throws Error(SingularFit) if the linear part is not invertible.
  AffineTransform2D inverse() const;

 private:
  Eigen::Matrix<double, 2, 3> matrix_;
};

/// Least-squares affine map taking `src[i]` onto `dst[i]`.
/// Throws Error(SingularFit) when either point set is collinear.
AffineTransform2D fit_affine(std::span<const Point2> src, std::span<const Point2> dst);

LandmarkShape transform_shape(const AffineTransform2D& transform, const LandmarkShape& shape);

/// Maps `shape` onto `reference` with its best-fitting global affine transform.
LandmarkShape align_to_reference(const LandmarkShape& shape, const LandmarkShape& reference);

/// Resamples `src` into a `width` x `height` canvas where `forward` maps source
/// pixel coordinates to canvas coordinates. Bilinear, border clamped.
ImageBuffer warp_affine(const ImageBuffer& src, const AffineTransform2D& forward, int width,
                        int height);

/// Offsets of the stabilization neighbourhood: the landmark itself followed by
/// `points` samples on each circle of radius 1..`radius`.
std::vector<Point2> stabilization_offsets(int radius, int points);

/// Normalized Gaussian weights (sigma = radius / 2) for stabilization_offsets.
std::vector<double> stabilization_weights(int radius, int points);

/// Displaces each landmark by the Gaussian-weighted mean flow of its circular
/// neighbourhood. Samples outside the field clamp to its border.
LandmarkShape stabilize_landmarks(const LandmarkShape& shape, const FlowField& flow, int radius,
                                  int points);

enum class Region { Mouth = 0, LeftEye = 1, RightEye = 2, Nose = 3 };
inline constexpr int kRegionCount = 4;
std::string_view to_string(Region region);

/// Inclusive pixel rectangle.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const noexcept { return x1 - x0 + 1; }
  int height() const noexcept { return y1 - y0 + 1; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct RegionSpec {
  Rect rect;
  int rows = 1;
  int cols = 1;

  int tile_count() const noexcept { return rows * cols; }
};

/// Tile grids: mouth 3x5, each eye 3x2, nose 4x2 (rows x cols).
inline constexpr std::array<std::array<int, 2>, kRegionCount> kRegionGrids{{{3, 5}, {3, 2}, {3, 2}, {4, 2}}};

struct RegionLayout {
  std::array<RegionSpec, kRegionCount> regions{};
  int image_width = 0;
  int image_height = 0;

  const RegionSpec& operator[](Region r) const { return regions[static_cast<std::size_t>(r)]; }
};

/// Padded bounding boxes of the mouth, eye and nose groups of `reference`,
/// clamped to a `width` x `height` image.
RegionLayout compute_rois(const LandmarkShape& reference, const LandmarkGroups& groups,
                          int padding, int width, int height);

/// Triangles as landmark index triples, counterclockwise in image orientation
/// of the shape they were computed on.
struct TriangleMesh {
  std::vector<std::array<int, 3>> triangles;
};

/// Delaunay triangulation of the 66 reference landmarks (sweep, then edge flips).
/// Throws Error(Triangulation) for coincident points.
TriangleMesh triangulate_reference(const LandmarkShape& reference);

}  // namespace reenact::landmarks
