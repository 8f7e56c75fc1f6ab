#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "reenact/image.hpp"
#include "reenact/landmark_core.hpp"

namespace reenact::lbp {

inline constexpr int kUniformBins = 59;  // 58 uniform 8-neighbour codes + catch-all
inline constexpr int kPlainBins = 16;    // all 4-neighbour codes
inline constexpr int kTileBins = kUniformBins + kPlainBins;
inline constexpr int kNonUniformLabel = 58;
inline constexpr double kChiSquaredEpsilon = 1e-10;

/// Luma (0.299, 0.587, 0.114), rounded. Gray input is returned unchanged.
ImageBuffer to_gray(const ImageBuffer& image);

/// LBP code at (x, y) for a radius-1 ring of `neighbors` (4 or 8) samples,
/// enumerated counterclockwise from east; bit i is set iff sample i >= centre.
/// The caller guarantees the ring lies inside the image.
int lbp_code(const ImageBuffer& gray, int x, int y, int neighbors);

/// Number of circular 0/1 transitions in an 8-bit code.
int circular_transitions(std::uint8_t code) noexcept;

/// Uniform codes get labels 0..57 in increasing code order; all others map to 58.
const std::array<std::uint8_t, 256>& uniform_label_table();

/// Concatenated per-tile histograms, tile-major (row by row), kTileBins per tile.
struct RegionDescriptor {
  int tiles = 0;
  std::vector<double> bins;

  std::span<const double> tile(int t) const {
    return std::span<const double>(bins).subspan(static_cast<std::size_t>(t) * kTileBins, kTileBins);
  }
  friend bool operator==(const RegionDescriptor&, const RegionDescriptor&) = default;
};

/// mouth, left eye, right eye, nose
struct FrameFeatures {
  std::array<RegionDescriptor, landmarks::kRegionCount> regions;
  friend bool operator==(const FrameFeatures&, const FrameFeatures&) = default;
};

/// Pixel bounds of tile (row, col) of `region`; the last row/column absorbs the remainder.
landmarks::Rect tile_rect(const landmarks::RegionSpec& region, int row, int col);

/// Per-tile 59-bin uniform 8-neighbour histogram followed by a 16-bin plain
/// 4-neighbour histogram over the tile interior (1-pixel margin), each L1-normalized.
/// Throws Error(DegenerateTile) for tiles smaller than 3x3.
RegionDescriptor region_descriptor(const ImageBuffer& gray, const landmarks::RegionSpec& region);

/// Features of an image already aligned to the reference frame.
FrameFeatures extract_features(const ImageBuffer& aligned, const landmarks::RegionLayout& layout);

/// (1/m) sum over tiles of 1/2 sum over bins (p - q)^2 / (p + q + eps), in [0, 1].
double chi_squared_distance(const RegionDescriptor& a, const RegionDescriptor& b);

/// Weighted sum of per-region chi-squared distances.
double appearance_distance(const FrameFeatures& a, const FrameFeatures& b,
                           const std::array<double, landmarks::kRegionCount>& weights);

/// Flat little-endian float64 dump: "RLBP", u32 frame count, u32 tiles per region x4,
/// then every frame's bins region by region.
void write_descriptors(const std::filesystem::path& file, std::span<const FrameFeatures> frames);
std::vector<FrameFeatures> read_descriptors(const std::filesystem::path& file);

}  // namespace reenact::lbp
