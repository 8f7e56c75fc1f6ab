#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "reenact/error.hpp"
#include "reenact/landmark_core.hpp"

namespace reenact::landmarks {

namespace {

// Relative eigenvalue ratio below which a point set counts as collinear.
constexpr double kCollinearRatio = 1e-12;

Eigen::Vector2d mean_of(std::span<const Point2> pts) {
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  for (const auto& p : pts) m += p;
  return m / static_cast<double>(pts.size());
}

bool is_collinear(const Eigen::Matrix2d& scatter) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
  const double largest = eig.eigenvalues()(1);
  const double smallest = eig.eigenvalues()(0);
  return !(largest > 0) || smallest <= kCollinearRatio * largest;
}

}  // namespace

AffineTransform2D AffineTransform2D::inverse() const {
  const Eigen::Matrix2d a = linear();
  const double det = a.determinant();
  if (!(std::abs(det) > kCollinearRatio * a.squaredNorm()) || !std::isfinite(det)) {
    throw Error(ErrorKind::SingularFit, "affine transform is not invertible");
  }
  const Eigen::Matrix2d inv = a.inverse();
  Eigen::Matrix<double, 2, 3> m;
  m.leftCols<2>() = inv;
  m.col(2) = -inv * translation();
  return AffineTransform2D(m);
}

AffineTransform2D fit_affine(std::span<const Point2> src, std::span<const Point2> dst) {
  if (src.size() != dst.size() || src.size() < 3) {
    throw Error(ErrorKind::SingularFit, "affine fit needs matching point sets of at least 3 points, got " +
                                            std::to_string(src.size()) + " and " +
                                            std::to_string(dst.size()));
  }
  const Eigen::Vector2d src_mean = mean_of(src);
  const Eigen::Vector2d dst_mean = mean_of(dst);
  Eigen::Matrix2d src_scatter = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d dst_scatter = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d cross = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Eigen::Vector2d s = src[i] - src_mean;
    const Eigen::Vector2d d = dst[i] - dst_mean;
    src_scatter += s * s.transpose();
    dst_scatter += d * d.transpose();
    cross += d * s.transpose();
  }
  if (!src_scatter.allFinite() || !dst_scatter.allFinite()) {
    throw Error(ErrorKind::SingularFit, "affine fit on non-finite points");
  }
  if (is_collinear(src_scatter)) {
    throw Error(ErrorKind::SingularFit, "affine fit: source points are collinear");
  }
  if (is_collinear(dst_scatter)) {
    throw Error(ErrorKind::SingularFit, "affine fit: destination points are collinear");
  }
  // Normal equations of the centred problem: A * S_src = C.
  const Eigen::Matrix2d a = src_scatter.ldlt().solve(cross.transpose()).transpose();
  Eigen::Matrix<double, 2, 3> m;
  m.leftCols<2>() = a;
  m.col(2) = dst_mean - a * src_mean;
  return AffineTransform2D(m);
}

LandmarkShape transform_shape(const AffineTransform2D& transform, const LandmarkShape& shape) {
  LandmarkShape out = shape;
  for (auto& p : out.points) p = transform.apply(p);
  return out;
}

LandmarkShape align_to_reference(const LandmarkShape& shape, const LandmarkShape& reference) {
  return transform_shape(fit_affine(shape.points, reference.points), shape);
}

ImageBuffer warp_affine(const ImageBuffer& src, const AffineTransform2D& forward, int width,
                        int height) {
  const AffineTransform2D backward = forward.inverse();
  ImageBuffer out(width, height, src.channels());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2 s = backward.apply(Point2(x, y));
      for (int c = 0; c < src.channels(); ++c) {
        out.at(x, y, c) = quantize(sample_bilinear(src, s.x(), s.y(), c));
      }
    }
  }
  return out;
}

}  // namespace reenact::landmarks
