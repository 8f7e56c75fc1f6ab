#include <cmath>
#include <numbers>

#include "reenact/synth.hpp"

namespace reenact::synth {

namespace {

using std::numbers::pi;

/// Landmarks in face units: origin between the jaw ends, x to the subject's
/// left-to-right in the image, y down, unit = half the jaw width.
LandmarkPoints canonical_points(const Expression& e) {
  LandmarkPoints p;
  const double drop = 0.28 * e.mouth_open;

  for (int i = 0; i <= 16; ++i) {
    const double theta = pi - i * pi / 16.0;
    const double s = std::sin(theta);
    p[i] = {std::cos(theta), 1.3 * s + drop * s * s * s};
  }

  const double brow_y = -0.42 - 0.12 * e.brow_raise;
  for (int k = 0; k < 5; ++k) {
    const double u = k / 4.0;
    const double arch = 0.09 * std::sin(u * pi) * (1.0 + 0.3 * e.brow_raise);
    p[17 + k] = {-0.78 + 0.56 * u, brow_y - arch + 0.04 * (1.0 - u)};
    p[26 - k] = {0.78 - 0.56 * u, brow_y - arch + 0.04 * (1.0 - u)};
  }

  for (int k = 0; k < 4; ++k) p[27 + k] = {0.0, -0.22 + 0.17 * k};
  const double nostril_y[5] = {0.36, 0.39, 0.41, 0.39, 0.36};
  for (int k = 0; k < 5; ++k) p[31 + k] = {-0.2 + 0.1 * k, nostril_y[k]};

  const double eye_h = 0.085 * e.eye_open;
  const auto eye = [&](int first, double cx, bool left) {
    const double w = 0.17;
    const double sx = left ? 1.0 : -1.0;
    // outer corner, upper outer, upper inner, inner corner, lower inner, lower outer
    // (mirrored for the right eye so it starts at its inner corner)
    const Point2 outer(cx - sx * w, -0.2);
    const Point2 inner(cx + sx * w, -0.2);
    const Point2 up_o(cx - sx * 0.35 * w, -0.2 - eye_h);
    const Point2 up_i(cx + sx * 0.35 * w, -0.2 - eye_h);
    const Point2 lo_i(cx + sx * 0.35 * w, -0.2 + 0.8 * eye_h);
    const Point2 lo_o(cx - sx * 0.35 * w, -0.2 + 0.8 * eye_h);
    if (left) {
      p[first] = outer; p[first + 1] = up_o; p[first + 2] = up_i;
      p[first + 3] = inner; p[first + 4] = lo_i; p[first + 5] = lo_o;
    } else {
      p[first] = inner; p[first + 1] = up_i; p[first + 2] = up_o;
      p[first + 3] = outer; p[first + 4] = lo_o; p[first + 5] = lo_i;
    }
  };
  eye(36, -0.45, true);
  eye(42, 0.45, false);

  const double mouth_y = 0.78 + 0.5 * drop;
  const double half_w = 0.36 + 0.07 * e.smile;
  const double corner_lift = 0.1 * e.smile;
  const double upper_h = 0.11;
  const double lower_h = 0.12 + 0.3 * e.mouth_open;
  for (int k = 0; k < 12; ++k) {
    const double phi = pi + k * pi / 6.0;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double h = s < 0 ? upper_h : lower_h;
    const double lift = corner_lift * c * c;
    p[48 + k] = {half_w * c, mouth_y + h * s - lift};
  }
  const double gap = 0.02 + 0.27 * e.mouth_open;
  const double inner_w = 0.55 * half_w;
  const double lip_y = mouth_y - 0.5 * corner_lift * 0.25;
  p[60] = {-inner_w, lip_y - 0.01};
  p[61] = {0.0, lip_y - 0.02};
  p[62] = {inner_w, lip_y - 0.01};
  p[63] = {inner_w, lip_y + 0.8 * gap};
  p[64] = {0.0, lip_y + gap};
  p[65] = {-inner_w, lip_y + 0.8 * gap};
  return p;
}

}  // namespace

LandmarkShape face_shape(const Expression& expression, const Pose& pose, int frame_index) {
  const auto canonical = canonical_points(expression);
  const double c = std::cos(pose.angle);
  const double s = std::sin(pose.angle);
  LandmarkShape shape;
  shape.frame_index = frame_index;
  for (int i = 0; i < kLandmarkCount; ++i) {
    const Point2 q = pose.scale * canonical[i];
    shape.points[i] = {pose.cx + c * q.x() - s * q.y(), pose.cy + s * q.x() + c * q.y()};
  }
  return shape;
}

std::vector<Expression> expression_palette() {
  return {
      {0.0, 0.0, 0.0, 1.0},    // neutral
      {0.0, 0.9, 0.1, 0.9},    // smile
      {0.8, 0.0, 0.6, 1.2},    // surprise
      {0.1, -0.7, -0.7, 0.8},  // frown
      {0.5, 0.6, 0.2, 1.0},    // laugh
      {0.0, 0.0, 0.0, 0.15},   // eyes shut
      {0.35, -0.3, 0.9, 1.3},  // astonished
      {0.0, 0.4, -0.4, 0.55},  // squint
  };
}

}  // namespace reenact::synth
