#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "reenact/error.hpp"
#include "reenact/feature_lbp.hpp"

namespace reenact::lbp {

landmarks::Rect tile_rect(const landmarks::RegionSpec& region, int row, int col) {
  const int tile_w = region.rect.width() / region.cols;
  const int tile_h = region.rect.height() / region.rows;
  landmarks::Rect r;
  r.x0 = region.rect.x0 + col * tile_w;
  r.y0 = region.rect.y0 + row * tile_h;
  r.x1 = col == region.cols - 1 ? region.rect.x1 : r.x0 + tile_w - 1;
  r.y1 = row == region.rows - 1 ? region.rect.y1 : r.y0 + tile_h - 1;
  return r;
}

namespace {

void normalize_segment(std::span<double> bins) {
  double total = 0.0;
  for (double b : bins) total += b;
  if (total == 0.0) {
    for (double& b : bins) b = 1.0 / static_cast<double>(bins.size());
    return;
  }
  for (double& b : bins) b /= total;
}

}  // namespace

RegionDescriptor region_descriptor(const ImageBuffer& gray, const landmarks::RegionSpec& region) {
  if (gray.channels() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "LBP descriptors need a gray image");
  }
  const auto& rect = region.rect;
  if (rect.x0 < 0 || rect.y0 < 0 || rect.x1 >= gray.width() || rect.y1 >= gray.height() ||
      rect.x1 < rect.x0 || rect.y1 < rect.y0) {
    throw Error(ErrorKind::DimensionMismatch, "region lies outside the image");
  }
  const auto& labels = uniform_label_table();
  RegionDescriptor out;
  out.tiles = region.tile_count();
  out.bins.assign(static_cast<std::size_t>(out.tiles) * kTileBins, 0.0);
  for (int row = 0; row < region.rows; ++row) {
    for (int col = 0; col < region.cols; ++col) {
      const auto tile = tile_rect(region, row, col);
      if (tile.width() < 3 || tile.height() < 3) {
        throw Error(ErrorKind::DegenerateTile,
                    "tile (" + std::to_string(row) + "," + std::to_string(col) + ") is " +
                        std::to_string(tile.width()) + "x" + std::to_string(tile.height()) +
                        ", smaller than 3x3");
      }
      const auto offset = static_cast<std::size_t>(row * region.cols + col) * kTileBins;
      std::span<double> hist(out.bins.data() + offset, kTileBins);
      for (int y = tile.y0 + 1; y < tile.y1; ++y) {
        for (int x = tile.x0 + 1; x < tile.x1; ++x) {
          hist[labels[static_cast<std::size_t>(lbp_code(gray, x, y, 8))]] += 1.0;
          hist[kUniformBins + static_cast<std::size_t>(lbp_code(gray, x, y, 4))] += 1.0;
        }
      }
      normalize_segment(hist.first(kUniformBins));
      normalize_segment(hist.subspan(kUniformBins));
    }
  }
  return out;
}

FrameFeatures extract_features(const ImageBuffer& aligned, const landmarks::RegionLayout& layout) {
  if (aligned.width() != layout.image_width || aligned.height() != layout.image_height) {
    throw Error(ErrorKind::DimensionMismatch, "aligned frame does not match the reference layout");
  }
  const ImageBuffer gray = to_gray(aligned);
  FrameFeatures features;
  for (std::size_t r = 0; r < features.regions.size(); ++r) {
    features.regions[r] = region_descriptor(gray, layout.regions[r]);
  }
  return features;
}

double chi_squared_distance(const RegionDescriptor& a, const RegionDescriptor& b) {
  if (a.tiles != b.tiles || a.bins.size() != b.bins.size() || a.tiles == 0) {
    throw Error(ErrorKind::DimensionMismatch, "region descriptors have different tile counts");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    const double p = a.bins[i];
    const double q = b.bins[i];
    const double diff = p - q;
    total += diff * diff / (p + q + kChiSquaredEpsilon);
  }
  // Two L1-normalized segments per tile, each contributing at most 2.
  return 0.5 * total / (2.0 * a.tiles);
}

double appearance_distance(const FrameFeatures& a, const FrameFeatures& b,
                           const std::array<double, landmarks::kRegionCount>& weights) {
  double d = 0.0;
  for (std::size_t r = 0; r < a.regions.size(); ++r) {
    d += weights[r] * chi_squared_distance(a.regions[r], b.regions[r]);
  }
  return d;
}

namespace {

constexpr char kTag[4] = {'R', 'L', 'B', 'P'};

}  // namespace

void write_descriptors(const std::filesystem::path& file, std::span<const FrameFeatures> frames) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write descriptors " + file.string());
  out.write(kTag, 4);
  const auto count = static_cast<std::uint32_t>(frames.size());
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (std::size_t r = 0; r < landmarks::kRegionCount; ++r) {
    const auto tiles = static_cast<std::uint32_t>(frames.empty() ? 0 : frames[0].regions[r].tiles);
    out.write(reinterpret_cast<const char*>(&tiles), 4);
  }
  for (const auto& f : frames) {
    for (const auto& region : f.regions) {
      out.write(reinterpret_cast<const char*>(region.bins.data()),
                static_cast<std::streamsize>(region.bins.size() * sizeof(double)));
    }
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing descriptors " + file.string());
}

std::vector<FrameFeatures> read_descriptors(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open descriptors " + file.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = 4 + 4 + 4 * landmarks::kRegionCount;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), kTag, 4) != 0) {
    throw Error(ErrorKind::Format, "descriptor file " + file.string() + " has a bad header");
  }
  std::uint32_t count = 0;
  std::memcpy(&count, bytes.data() + 4, 4);
  std::array<std::uint32_t, landmarks::kRegionCount> tiles{};
  std::memcpy(tiles.data(), bytes.data() + 8, 4 * landmarks::kRegionCount);
  std::size_t per_frame = 0;
  for (auto t : tiles) per_frame += static_cast<std::size_t>(t) * kTileBins;
  if (bytes.size() != kHeader + count * per_frame * sizeof(double)) {
    throw Error(ErrorKind::Format, "descriptor file " + file.string() + " is truncated");
  }
  std::vector<FrameFeatures> frames(count);
  const char* cursor = bytes.data() + kHeader;
  for (auto& f : frames) {
    for (std::size_t r = 0; r < landmarks::kRegionCount; ++r) {
      auto& region = f.regions[r];
      region.tiles = static_cast<int>(tiles[r]);
      region.bins.resize(static_cast<std::size_t>(tiles[r]) * kTileBins);
      std::memcpy(region.bins.data(), cursor, region.bins.size() * sizeof(double));
      cursor += region.bins.size() * sizeof(double);
    }
  }
  return frames;
}

}  // namespace reenact::lbp
