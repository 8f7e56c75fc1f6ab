#include <cmath>
#include <numbers>

#include "reenact/error.hpp"
#include "reenact/landmark_core.hpp"

namespace reenact::landmarks {

std::vector<Point2> stabilization_offsets(int radius, int points) {
  std::vector<Point2> offsets;
  offsets.reserve(static_cast<std::size_t>(radius * points + 1));
  offsets.emplace_back(0.0, 0.0);
  for (int ring = 1; ring <= radius; ++ring) {
    for (int j = 0; j < points; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / points;
      offsets.emplace_back(ring * std::cos(angle), ring * std::sin(angle));
    }
  }
  return offsets;
}

std::vector<double> stabilization_weights(int radius, int points) {
  const double sigma = radius / 2.0;
  const auto offsets = stabilization_offsets(radius, points);
  std::vector<double> weights;
  weights.reserve(offsets.size());
  double total = 0.0;
  for (const auto& o : offsets) {
    weights.push_back(std::exp(-o.squaredNorm() / (2.0 * sigma * sigma)));
    total += weights.back();
  }
  for (auto& w : weights) w /= total;
  return weights;
}

LandmarkShape stabilize_landmarks(const LandmarkShape& shape, const FlowField& flow, int radius,
                                  int points) {
  if (radius < 1 || points < 1) {
    throw Error(ErrorKind::Config, "stabilization needs radius >= 1 and points >= 1");
  }
  const auto offsets = stabilization_offsets(radius, points);
  const auto weights = stabilization_weights(radius, points);
  LandmarkShape out = shape;
  for (auto& p : out.points) {
    Point2 displacement = Point2::Zero();
    for (std::size_t s = 0; s < offsets.size(); ++s) {
      const Point2 q = p + offsets[s];
      displacement += weights[s] * flow.sample(q.x(), q.y());
    }
    p += displacement;
  }
  return out;
}

}  // namespace reenact::landmarks
