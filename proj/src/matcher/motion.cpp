#include <cmath>

#include "reenact/error.hpp"
#include "reenact/matcher.hpp"

namespace reenact::matching {

namespace {

LandmarkPoints mean_shape(const ClusterSpan& span, std::span<const LandmarkShape> shapes) {
  if (span.start < 0 || span.end >= static_cast<int>(shapes.size()) || span.end < span.start) {
    throw Error(ErrorKind::DimensionMismatch, "cluster span outside the shape track");
  }
  LandmarkPoints mean;
  mean.fill(Point2::Zero());
  for (int t = span.start; t <= span.end; ++t) {
    for (int i = 0; i < kLandmarkCount; ++i) mean[i] += shapes[static_cast<std::size_t>(t)].points[i];
  }
  for (auto& p : mean) p /= span.length();
  return mean;
}

}  // namespace

MotionField66 cluster_motion(const ClusterSpan& previous, const ClusterSpan& current,
                             std::span<const LandmarkShape> shapes) {
  const auto before = mean_shape(previous, shapes);
  const auto after = mean_shape(current, shapes);
  MotionField66 field;
  for (int i = 0; i < kLandmarkCount; ++i) field[i] = after[i] - before[i];
  return field;
}

std::vector<std::optional<MotionField66>> cluster_motions(std::span<const ClusterSpan> spans,
                                                          std::span<const LandmarkShape> shapes) {
  std::vector<std::optional<MotionField66>> out(spans.size());
  for (std::size_t k = 1; k < spans.size(); ++k) {
    out[k] = cluster_motion(spans[k - 1], spans[k], shapes);
  }
  return out;
}

MotionField66 shape_difference(const LandmarkShape& from, const LandmarkShape& to) {
  MotionField66 field;
  for (int i = 0; i < kLandmarkCount; ++i) field[i] = to.points[i] - from.points[i];
  return field;
}

MotionTerms motion_terms(const MotionField66& a, const MotionField66& b) {
  MotionTerms terms;
  for (int i = 0; i < kLandmarkCount; ++i) {
    const double na = a[i].norm();
    const double nb = b[i].norm();
    terms.euclidean += (a[i] - b[i]).norm();
    if (na >= kMotionNormFloor && nb >= kMotionNormFloor) {
      terms.angular += 1.0 - a[i].dot(b[i]) / (na * nb);
    }
    terms.magnitude += std::abs(na - nb);
  }
  terms.euclidean /= kLandmarkCount;
  terms.angular /= kLandmarkCount;
  terms.magnitude /= kLandmarkCount;
  return terms;
}

double motion_distance(const MotionField66& a, const MotionField66& b) {
  const MotionTerms t = motion_terms(a, b);
  return 1.0 - (std::exp(-t.euclidean) + std::exp(-t.angular) + std::exp(-t.magnitude)) / 3.0;
}

std::vector<LandmarkShape> normalize_shapes(std::span<const LandmarkShape> aligned,
                                            const LandmarkShape& reference) {
  Point2 centroid = Point2::Zero();
  for (const auto& p : reference.points) centroid += p;
  centroid /= kLandmarkCount;
  double spread = 0.0;
  for (const auto& p : reference.points) spread += (p - centroid).squaredNorm();
  spread = std::sqrt(spread / kLandmarkCount);
  if (!(spread > 0.0)) throw Error(ErrorKind::SingularFit, "reference shape has zero extent");
  std::vector<LandmarkShape> out(aligned.begin(), aligned.end());
  for (auto& shape : out) {
    for (auto& p : shape.points) p = (p - centroid) / spread;
  }
  return out;
}

}  // namespace reenact::matching
