#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reenact/image.hpp"
#include "reenact/shape.hpp"

namespace reenact {

/// Dense per-pixel displacement field (dx, dy), row-major.
class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height);
  FlowField(int width, int height, std::vector<float> vectors);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  float dx(int x, int y) const noexcept { return vectors_[offset(x, y)]; }
  float dy(int x, int y) const noexcept { return vectors_[offset(x, y) + 1]; }
  void set(int x, int y, float dx, float dy) noexcept {
    vectors_[offset(x, y)] = dx;
    vectors_[offset(x, y) + 1] = dy;
  }

  /// Bilinear sample with coordinates clamped to the field.
  Point2 sample(double x, double y) const noexcept;

  std::span<const float> vectors() const noexcept { return vectors_; }

 private:
  std::size_t offset(int x, int y) const noexcept {
    return 2 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x));
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> vectors_;
};

namespace io {

inline constexpr std::string_view kFramePrefix = "frame_";
inline constexpr std::string_view kFlowPrefix = "flow_";
inline constexpr int kIndexDigits = 6;

/// `<dir>/<prefix><index zero-padded to 6 digits><extension>`
std::filesystem::path indexed_path(const std::filesystem::path& dir, std::string_view prefix,
                                   int index, std::string_view extension);

ImageBuffer read_image(const std::filesystem::path& file);
void write_image(const std::filesystem::path& file, const ImageBuffer& image);

/// Loads `frame_000000.*`, `frame_000001.*`, ... (PNG or PPM/PGM) in index order.
std::vector<ImageBuffer> load_frame_sequence(const std::filesystem::path& dir,
                                             std::string_view prefix = kFramePrefix);

/// Writes lossless PNGs named with the same template that load_frame_sequence reads.
void write_frame_sequence(std::span<const ImageBuffer> frames, const std::filesystem::path& dir,
                          std::string_view prefix = kFramePrefix);

// Landmark tracks: one text record per frame, `frame_index x0 y0 ... x65 y65`.
// Blank lines and lines starting with '#' are ignored.
std::vector<LandmarkShape> parse_landmark_track(std::string_view text, int expected_frames,
                                                std::string_view source_name = "<memory>");
std::vector<LandmarkShape> load_landmark_track(const std::filesystem::path& file,
                                               int expected_frames);
void write_landmark_track(const std::filesystem::path& file, std::span<const LandmarkShape> shapes);

/// Middlebury `.flo`: "PIEH" tag, int32 width, int32 height, float32 (dx, dy) pairs.
FlowField load_flow_field(const std::filesystem::path& file);
void write_flow_field(const std::filesystem::path& file, const FlowField& flow);

}  // namespace io

/// Flat key=value run configuration.
struct RunConfig {
  std::filesystem::path source_dir;
  std::filesystem::path target_dir;
  std::filesystem::path output_dir;
  std::filesystem::path source_landmarks;  // default: <source_dir>/landmarks.txt
  std::filesystem::path target_landmarks;  // default: <target_dir>/landmarks.txt
  std::optional<std::filesystem::path> source_flow_dir;
  std::optional<std::filesystem::path> target_flow_dir;
  std::optional<std::filesystem::path> color_matrices;
  std::optional<std::filesystem::path> cache_dir;

  LandmarkGroups groups = LandmarkGroups::defaults();
  /// mouth, left eye, right eye, nose
  std::array<double, 4> region_weights{0.6, 0.15, 0.15, 0.1};
  double tau = 0.8;
  /// previous, current, next target frame
  std::array<double, 3> alpha{0.1, 0.8, 0.1};
  double w_nr = 0.6;
  double w_r = 0.4;
  double seam_sigma = 9.0;
  double erosion_sigma = 5.0;
  int roi_padding = 10;
  int stabilize_radius = 2;
  int stabilize_points = 8;
  bool temporal_clustering = true;

  /// Throws Error(Config) when an invariant is violated.
  void validate() const;
};

/// Parses `key = value` lines. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& file);
std::string format_run_config(const RunConfig& config);

}  // namespace reenact
