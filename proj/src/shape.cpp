#include "reenact/shape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "reenact/error.hpp"

namespace reenact {

bool LandmarkShape::all_finite() const noexcept {
  return std::all_of(points.begin(), points.end(),
                     [](const Point2& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); });
}

namespace {

std::vector<int> index_range(int first, int last) {
  std::vector<int> out(static_cast<std::size_t>(last - first + 1));
  std::iota(out.begin(), out.end(), first);
  return out;
}

}  // namespace

LandmarkGroups LandmarkGroups::defaults() {
  LandmarkGroups g;
  g.outline = index_range(0, 16);
  g.brows = index_range(17, 26);
  g.nose = index_range(27, 35);
  g.left_eye = index_range(36, 41);
  g.right_eye = index_range(42, 47);
  g.mouth = index_range(48, 65);
  return g;
}

void LandmarkGroups::validate() const {
  std::array<bool, kLandmarkCount> used{};
  const std::array<std::pair<const char*, const std::vector<int>*>, 6> all{{
      {"outline", &outline},
      {"brows", &brows},
      {"nose", &nose},
      {"left_eye", &left_eye},
      {"right_eye", &right_eye},
      {"mouth", &mouth},
  }};
  for (const auto& [name, group] : all) {
    if (group->empty()) {
      throw Error(ErrorKind::Config, std::string("landmark group '") + name + "' is empty");
    }
    for (int index : *group) {
      if (index < 0 || index >= kLandmarkCount) {
        throw Error(ErrorKind::Config, std::string("landmark group '") + name +
                                           "' has index " + std::to_string(index) +
                                           " outside [0,65]");
      }
      if (used[static_cast<std::size_t>(index)]) {
        throw Error(ErrorKind::Config, "landmark index " + std::to_string(index) +
                                           " appears in more than one group (at '" + name +
                                           "')");
      }
      used[static_cast<std::size_t>(index)] = true;
    }
  }
}

std::vector<Point2> gather(const LandmarkShape& shape, std::span<const int> indices) {
  std::vector<Point2> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(shape.points.at(static_cast<std::size_t>(i)));
  return out;
}

}  // namespace reenact
