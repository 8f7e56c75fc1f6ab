#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "reenact/composite.hpp"
#include "reenact/error.hpp"

namespace reenact::composite {

ColorTransform ColorTransform::defaults() {
  ColorTransform t;
  t.to_cone << 0.45053323, 0.53354920, 0.06724293,
               0.16268987, 0.66885728, 0.05739789,
               0.04742167, 0.11833531, 0.95851866;
  t.cone_to_perceptual << 27.07439, -22.80783, -1.806681,
                          -5.646736, -7.722125, 12.86503,
                          -4.163133, -4.579428, -4.576049;
  return t;
}

ColorTransform ColorTransform::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot open colour matrices " + file.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::Format, file.string() + ": bad matrix entry '" + token + "'");
      }
      values.push_back(v);
    }
  }
  if (values.size() != 18) {
    throw Error(ErrorKind::Format, file.string() + ": expected 18 matrix entries, found " +
                                       std::to_string(values.size()));
  }
  ColorTransform t;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      t.to_cone(r, c) = values[static_cast<std::size_t>(3 * r + c)];
      t.cone_to_perceptual(r, c) = values[static_cast<std::size_t>(9 + 3 * r + c)];
    }
  }
  for (const auto* m : {&t.to_cone, &t.cone_to_perceptual}) {
    if (Eigen::FullPivLU<Eigen::Matrix3d>(*m).rank() < 3) {
      throw Error(ErrorKind::Format, file.string() + ": colour matrix is singular");
    }
  }
  return t;
}

PerceptualImage rgb_to_perceptual(const ImageBuffer& rgb, const ColorTransform& transform) {
  if (rgb.channels() != 3) throw Error(ErrorKind::Format, "colour conversion needs 3 channels");
  PerceptualImage out(rgb.width(), rgb.height(), 3);
  auto src = rgb.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    const Eigen::Vector3d c(src[i] / 255.0, src[i + 1] / 255.0, src[i + 2] / 255.0);
    Eigen::Vector3d cone = transform.to_cone * c;
    for (int k = 0; k < 3; ++k) cone[k] = std::log(std::max(cone[k], kConeFloor));
    const Eigen::Vector3d p = transform.cone_to_perceptual * cone;
    dst[i] = p[0];
    dst[i + 1] = p[1];
    dst[i + 2] = p[2];
  }
  return out;
}

FloatImage perceptual_to_rgb(const PerceptualImage& image, const ColorTransform& transform) {
  if (image.channels() != 3) throw Error(ErrorKind::Format, "colour conversion needs 3 channels");
  const Eigen::Matrix3d from_perceptual = transform.cone_to_perceptual.inverse();
  const Eigen::Matrix3d from_cone = transform.to_cone.inverse();
  FloatImage out(image.width(), image.height(), 3);
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    Eigen::Vector3d cone = from_perceptual * Eigen::Vector3d(src[i], src[i + 1], src[i + 2]);
    for (int k = 0; k < 3; ++k) cone[k] = std::exp(cone[k]);
    const Eigen::Vector3d c = 255.0 * (from_cone * cone);
    dst[i] = c[0];
    dst[i + 1] = c[1];
    dst[i + 2] = c[2];
  }
  return out;
}

}  // namespace reenact::composite
