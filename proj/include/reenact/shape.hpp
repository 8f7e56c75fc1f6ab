#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace reenact {

inline constexpr int kLandmarkCount = 66;

using Point2 = Eigen::Vector2d;
using LandmarkPoints = std::array<Point2, kLandmarkCount>;

/// The 66 tracked landmarks of one frame, in image pixel coordinates.
struct LandmarkShape {
  int frame_index = 0;
  LandmarkPoints points{};

  bool all_finite() const noexcept;
};

/// Landmark indices per facial feature. Every group is a disjoint subset of [0, 65].
struct LandmarkGroups {
  std::vector<int> outline;
  std::vector<int> brows;
  std::vector<int> nose;
  std::vector<int> left_eye;
  std::vector<int> right_eye;
  std::vector<int> mouth;

  /// outline 0-16, brows 17-26, nose 27-35, eyes 36-41 / 42-47, mouth 48-65.
  static LandmarkGroups defaults();

  /// Throws Error(Config) on out-of-range, overlapping or empty groups.
  void validate() const;
};

/// Gathers the points of `indices` from `shape`.
std::vector<Point2> gather(const LandmarkShape& shape, std::span<const int> indices);

}  // namespace reenact
