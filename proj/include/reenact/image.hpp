#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace reenact {

/// Row-major, channel-interleaved raster with 1 or 3 channels.
///
/// `Raster<std::uint8_t>` is the unit of all pixel I/O; `Raster<double>` carries
/// intermediate results that are quantized once at the end of a computation.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, int channels, T fill = T{});
  Raster(int width, int height, int channels, std::vector<T> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  const std::vector<T>& storage() const noexcept { return data_; }

  bool same_shape(int width, int height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height() &&
           channels_ == other.channels();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

using ImageBuffer = Raster<std::uint8_t>;
using FloatImage = Raster<double>;

/// Single-channel boolean raster; nonzero samples are foreground.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool get(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) noexcept { bits_[index(x, y)] = value ? 1 : 0; }

  std::size_t area() const noexcept;
  bool empty_foreground() const noexcept { return area() == 0; }
  bool touches_border() const noexcept;

  BinaryMask operator&(const BinaryMask& other) const;
  BinaryMask operator|(const BinaryMask& other) const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Bilinear sample of channel `c` with coordinates clamped to the raster.
template <typename T>
double sample_bilinear(const Raster<T>& image, double x, double y, int c = 0);

/// Round-half-up quantization to [0, 255].
std::uint8_t quantize(double value) noexcept;

ImageBuffer quantize(const FloatImage& image);
FloatImage to_float(const ImageBuffer& image);

/// Foreground pixels whose 4-neighbourhood is entirely foreground.
BinaryMask erode_4(const BinaryMask& mask);

}  // namespace reenact
