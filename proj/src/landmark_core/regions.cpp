#include <algorithm>
#include <cmath>
#include <limits>

#include "reenact/error.hpp"
#include "reenact/landmark_core.hpp"

namespace reenact::landmarks {

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Mouth: return "mouth";
    case Region::LeftEye: return "left_eye";
    case Region::RightEye: return "right_eye";
    case Region::Nose: return "nose";
  }
  return "unknown";
}

namespace {

Rect padded_box(const LandmarkShape& shape, const std::vector<int>& group, std::string_view name,
                int padding, int width, int height) {
  if (group.empty()) {
    throw Error(ErrorKind::Config, "region '" + std::string(name) + "' has no landmarks");
  }
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (int i : group) {
    const Point2& p = shape.points.at(static_cast<std::size_t>(i));
    min_x = std::min(min_x, p.x());
    min_y = std::min(min_y, p.y());
    max_x = std::max(max_x, p.x());
    max_y = std::max(max_y, p.y());
  }
  Rect r;
  r.x0 = std::clamp(static_cast<int>(std::floor(min_x)) - padding, 0, width - 1);
  r.y0 = std::clamp(static_cast<int>(std::floor(min_y)) - padding, 0, height - 1);
  r.x1 = std::clamp(static_cast<int>(std::ceil(max_x)) + padding, 0, width - 1);
  r.y1 = std::clamp(static_cast<int>(std::ceil(max_y)) + padding, 0, height - 1);
  return r;
}

}  // namespace

RegionLayout compute_rois(const LandmarkShape& reference, const LandmarkGroups& groups,
                          int padding, int width, int height) {
  if (width < 1 || height < 1) throw Error(ErrorKind::Config, "reference image is empty");
  if (padding < 0) throw Error(ErrorKind::Config, "ROI padding must be non-negative");
  const std::array<const std::vector<int>*, kRegionCount> members{
      &groups.mouth, &groups.left_eye, &groups.right_eye, &groups.nose};
  RegionLayout layout;
  layout.image_width = width;
  layout.image_height = height;
  for (int r = 0; r < kRegionCount; ++r) {
    auto& spec = layout.regions[static_cast<std::size_t>(r)];
    spec.rect = padded_box(reference, *members[static_cast<std::size_t>(r)],
                           to_string(static_cast<Region>(r)), padding, width, height);
    spec.rows = kRegionGrids[static_cast<std::size_t>(r)][0];
    spec.cols = kRegionGrids[static_cast<std::size_t>(r)][1];
  }
  return layout;
}

}  // namespace reenact::landmarks
