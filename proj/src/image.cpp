#include "reenact/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reenact/error.hpp"

namespace reenact {

namespace {

void check_dims(int width, int height, int channels) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::DimensionMismatch,
                "raster dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::DimensionMismatch,
                "raster must have 1 or 3 channels, got " + std::to_string(channels));
  }
}

}  // namespace

template <typename T>
Raster<T>::Raster(int width, int height, int channels, T fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

template <typename T>
Raster<T>::Raster(int width, int height, int channels, std::vector<T> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    throw Error(ErrorKind::DimensionMismatch,
                "raster payload has " + std::to_string(data_.size()) + " samples, expected " +
                    std::to_string(pixel_count() * static_cast<std::size_t>(channels)));
  }
}

template class Raster<std::uint8_t>;
template class Raster<double>;

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::DimensionMismatch, "mask dimensions must be positive");
  }
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill ? 1 : 0);
}

std::size_t BinaryMask::area() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::touches_border() const noexcept {
  for (int x = 0; x < width_; ++x) {
    if (get(x, 0) || get(x, height_ - 1)) return true;
  }
  for (int y = 0; y < height_; ++y) {
    if (get(0, y) || get(width_ - 1, y)) return true;
  }
  return false;
}

BinaryMask BinaryMask::operator&(const BinaryMask& other) const {
  if (width_ != other.width_ || height_ != other.height_) {
    throw Error(ErrorKind::DimensionMismatch, "mask intersection of different sizes");
  }
  BinaryMask out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
  return out;
}

BinaryMask BinaryMask::operator|(const BinaryMask& other) const {
  if (width_ != other.width_ || height_ != other.height_) {
    throw Error(ErrorKind::DimensionMismatch, "mask union of different sizes");
  }
  BinaryMask out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | other.bits_[i];
  return out;
}

template <typename T>
double sample_bilinear(const Raster<T>& image, double x, double y, int c) {
  const double max_x = image.width() - 1;
  const double max_y = image.height() - 1;
  x = std::clamp(x, 0.0, max_x);
  y = std::clamp(y, 0.0, max_y);
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, image.width() - 1);
  const int y1 = std::min(y0 + 1, image.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  // Lerp form keeps constant neighbourhoods exact.
  const double v00 = image.at(x0, y0, c);
  const double v10 = image.at(x1, y0, c);
  const double v01 = image.at(x0, y1, c);
  const double v11 = image.at(x1, y1, c);
  const double top = v00 + fx * (v10 - v00);
  const double bottom = v01 + fx * (v11 - v01);
  return top + fy * (bottom - top);
}

template double sample_bilinear(const Raster<std::uint8_t>&, double, double, int);
template double sample_bilinear(const Raster<double>&, double, double, int);

std::uint8_t quantize(double value) noexcept {
  const double rounded = std::floor(value + 0.5);
  return static_cast<std::uint8_t>(std::clamp(rounded, 0.0, 255.0));
}

ImageBuffer quantize(const FloatImage& image) {
  ImageBuffer out(image.width(), image.height(), image.channels());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize(src[i]);
  return out;
}

FloatImage to_float(const ImageBuffer& image) {
  FloatImage out(image.width(), image.height(), image.channels());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return out;
}

BinaryMask erode_4(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.get(x, y)) continue;
      const bool keep = mask.contains(x - 1, y) && mask.get(x - 1, y) &&
                        mask.contains(x + 1, y) && mask.get(x + 1, y) &&
                        mask.contains(x, y - 1) && mask.get(x, y - 1) &&
                        mask.contains(x, y + 1) && mask.get(x, y + 1);
      out.set(x, y, keep);
    }
  }
  return out;
}

}  // namespace reenact
