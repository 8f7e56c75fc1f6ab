#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "reenact/synth.hpp"

namespace reenact::synth {

namespace {

using Color = std::array<double, 3>;

struct Polygon {
  std::vector<Point2> vertices;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  explicit Polygon(std::vector<Point2> v) : vertices(std::move(v)) {
    x0 = x1 = vertices[0].x();
    y0 = y1 = vertices[0].y();
    for (const auto& p : vertices) {
      x0 = std::min(x0, p.x());
      x1 = std::max(x1, p.x());
      y0 = std::min(y0, p.y());
      y1 = std::max(y1, p.y());
    }
  }

  // Even-odd crossing test.
  bool contains(const Point2& p) const {
    if (p.x() < x0 || p.x() > x1 || p.y() < y0 || p.y() > y1) return false;
    bool inside = false;
    for (std::size_t i = 0, j = vertices.size() - 1; i < vertices.size(); j = i++) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[j];
      if ((a.y() > p.y()) != (b.y() > p.y()) &&
          p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) {
        inside = !inside;
      }
    }
    return inside;
  }
};

Polygon indexed(const LandmarkShape& s, std::initializer_list<int> ids) {
  std::vector<Point2> v;
  for (int i : ids) v.push_back(s.points[i]);
  return Polygon(std::move(v));
}

Color mix(const Color& a, const Color& b, double t) {
  return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

class FacePainter {
 public:
  explicit FacePainter(const LandmarkShape& s)
      : origin_(0.5 * (s.points[0] + s.points[16])),
        ex_(0.5 * (s.points[16] - s.points[0])),
        ey_(-ex_.y(), ex_.x()),
        mouth_inner_(indexed(s, {48, 60, 61, 62, 54, 63, 64, 65})),
        lips_(indexed(s, {48, 49, 50, 51, 52, 53, 54, 55, 56, 57, 58, 59})),
        left_eye_(indexed(s, {36, 37, 38, 39, 40, 41})),
        right_eye_(indexed(s, {42, 43, 44, 45, 46, 47})),
        nose_(indexed(s, {27, 31, 33, 35})),
        face_(face_polygon(s)),
        left_brow_(brow_polygon(s, 17)),
        right_brow_(brow_polygon(s, 22)) {
    unit_ = ex_.norm();
    const double det = ex_.x() * ey_.y() - ex_.y() * ey_.x();
    inv_ << ey_.y() / det, -ey_.x() / det, -ex_.y() / det, ex_.x() / det;
    for (const auto* eye : {&left_eye_, &right_eye_}) {
      Point2 c = Point2::Zero();
      for (const auto& p : eye->vertices) c += p;
      eye_centres_.push_back(c / 6.0);
    }
    upper_lip_y_ = to_face(s.points[61]).y();
    nostrils_ = {s.points[32], s.points[34]};
  }

  const Polygon& face() const { return face_; }

  Color at(const Point2& p, const Color& background) const {
    if (!face_.contains(p)) return background;
    const Point2 f = to_face(p);
    if (mouth_inner_.contains(p)) {
      return f.y() < upper_lip_y_ + 0.06 ? Color{232, 226, 214} : Color{70, 22, 30};
    }
    if (lips_.contains(p)) {
      return mix(Color{186, 78, 88}, Color{150, 55, 66}, 0.5 + 0.2 * std::sin(9.0 * f.x()));
    }
    for (int e = 0; e < 2; ++e) {
      const Polygon& eye = e == 0 ? left_eye_ : right_eye_;
      if (!eye.contains(p)) continue;
      const double r = (p - eye_centres_[static_cast<std::size_t>(e)]).norm() / unit_;
      if (r < 0.035) return {18, 16, 20};
      if (r < 0.075) return mix(Color{52, 96, 128}, Color{90, 140, 160}, r / 0.075);
      return {238, 236, 228};
    }
    if (left_brow_.contains(p) || right_brow_.contains(p)) return {78, 54, 38};
    for (const auto& n : nostrils_) {
      if ((p - n).norm() < 0.035 * unit_) return {120, 72, 62};
    }
    Color skin = skin_at(f);
    if (nose_.contains(p)) skin = mix(skin, Color{176, 128, 104}, 0.35);
    return skin;
  }

 private:
  Point2 to_face(const Point2& p) const { return inv_ * (p - origin_); }

  Color skin_at(const Point2& f) const {
    const double shade = 1.0 - 0.1 * (f.x() * f.x() + 0.5 * f.y() * f.y());
    const double mottle = 7.0 * std::sin(7.3 * f.x() + 1.1) * std::sin(6.1 * f.y() + 0.4) +
                          4.0 * std::sin(17.0 * f.x() - 13.0 * f.y()) +
                          3.0 * std::cos(23.0 * f.y() + 5.0 * f.x());
    return {std::clamp(214.0 * shade + mottle, 0.0, 255.0),
            std::clamp(170.0 * shade + 0.8 * mottle, 0.0, 255.0),
            std::clamp(142.0 * shade + 0.6 * mottle, 0.0, 255.0)};
  }

  Polygon face_polygon(const LandmarkShape& s) const {
    std::vector<Point2> v(s.points.begin(), s.points.begin() + 17);
    constexpr int kArc = 16;
    for (int k = 1; k < kArc; ++k) {
      const double theta = k * std::numbers::pi / kArc;
      v.push_back(origin_ + std::cos(theta) * ex_ - 1.25 * std::sin(theta) * ey_);
    }
    return Polygon(std::move(v));
  }

  Polygon brow_polygon(const LandmarkShape& s, int first) const {
    std::vector<Point2> v;
    for (int k = 0; k < 5; ++k) v.push_back(s.points[first + k]);
    for (int k = 4; k >= 0; --k) v.push_back(s.points[first + k] + 0.075 * ey_);
    return Polygon(std::move(v));
  }

  Point2 origin_;
  Point2 ex_;
  Point2 ey_;
  Eigen::Matrix2d inv_;
  double unit_ = 1.0;
  double upper_lip_y_ = 0.0;
  Polygon mouth_inner_, lips_, left_eye_, right_eye_, nose_, face_, left_brow_, right_brow_;
  std::vector<Point2> eye_centres_;
  std::vector<Point2> nostrils_;
};

Color background_at(double x, double y) {
  return {96.0 + 22.0 * std::sin(x / 23.0) * std::cos(y / 31.0) + 6.0 * std::sin((x + y) / 5.0),
          112.0 + 18.0 * std::cos(x / 37.0) + 6.0 * std::sin((x - y) / 7.0),
          128.0 + 20.0 * std::sin(y / 19.0)};
}

}  // namespace

ImageBuffer render_face(const LandmarkShape& shape, int width, int height) {
  const FacePainter painter(shape);
  const Polygon& face = painter.face();
  ImageBuffer out(width, height, 3);
  constexpr double kOffsets[2] = {-0.25, 0.25};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool near_face =
          x >= face.x0 - 1 && x <= face.x1 + 1 && y >= face.y0 - 1 && y <= face.y1 + 1;
      Color acc{0, 0, 0};
      for (double oy : kOffsets) {
        for (double ox : kOffsets) {
          const Point2 p(x + ox, y + oy);
          const Color bg = background_at(p.x(), p.y());
          const Color c = near_face ? painter.at(p, bg) : bg;
          for (int k = 0; k < 3; ++k) acc[static_cast<std::size_t>(k)] += 0.25 * c[static_cast<std::size_t>(k)];
        }
      }
      for (int k = 0; k < 3; ++k) out.at(x, y, k) = quantize(acc[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

}  // namespace reenact::synth
