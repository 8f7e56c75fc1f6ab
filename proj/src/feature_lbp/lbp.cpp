#include <bit>
#include <cmath>
#include <numbers>

#include "reenact/error.hpp"
#include "reenact/feature_lbp.hpp"

namespace reenact::lbp {

ImageBuffer to_gray(const ImageBuffer& image) {
  if (image.channels() == 1) return image;
  ImageBuffer gray(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const double luma = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) +
                          0.114 * image.at(x, y, 2);
      gray.at(x, y) = quantize(luma);
    }
  }
  return gray;
}

int lbp_code(const ImageBuffer& gray, int x, int y, int neighbors) {
  const double center = gray.at(x, y);
  int code = 0;
  if (neighbors == 4) {
    // east, north, west, south (image y grows downwards)
    constexpr int dx[4] = {1, 0, -1, 0};
    constexpr int dy[4] = {0, -1, 0, 1};
    for (int i = 0; i < 4; ++i) {
      if (gray.at(x + dx[i], y + dy[i]) >= center) code |= 1 << i;
    }
    return code;
  }
  if (neighbors != 8) {
    throw Error(ErrorKind::Config, "LBP supports 4 or 8 neighbours, got " + std::to_string(neighbors));
  }
  constexpr double d = std::numbers::sqrt2 / 2.0;
  const double dx[8] = {1, d, 0, -d, -1, -d, 0, d};
  const double dy[8] = {0, -d, -1, -d, 0, d, 1, d};
  for (int i = 0; i < 8; ++i) {
    const double value = (i % 2 == 0)
                             ? static_cast<double>(gray.at(x + static_cast<int>(dx[i]),
                                                           y + static_cast<int>(dy[i])))
                             : sample_bilinear(gray, x + dx[i], y + dy[i]);
    if (value >= center) code |= 1 << i;
  }
  return code;
}

int circular_transitions(std::uint8_t code) noexcept {
  const auto rotated = static_cast<std::uint8_t>((code >> 1) | (code << 7));
  return std::popcount(static_cast<unsigned>(code ^ rotated));
}

const std::array<std::uint8_t, 256>& uniform_label_table() {
  static const auto table = [] {
    std::array<std::uint8_t, 256> t{};
    std::uint8_t next = 0;
    for (int code = 0; code < 256; ++code) {
      t[static_cast<std::size_t>(code)] =
          circular_transitions(static_cast<std::uint8_t>(code)) <= 2 ? next++ : kNonUniformLabel;
    }
    return t;
  }();
  return table;
}

}  // namespace reenact::lbp
