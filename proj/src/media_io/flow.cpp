#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "reenact/error.hpp"
#include "reenact/media_io.hpp"

namespace reenact {

static_assert(std::endian::native == std::endian::little,
              ".flo files are little-endian; big-endian hosts need byte swapping");

FlowField::FlowField(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw Error(ErrorKind::DimensionMismatch, "empty flow field");
  vectors_.assign(2 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0f);
}

FlowField::FlowField(int width, int height, std::vector<float> vectors)
    : width_(width), height_(height), vectors_(std::move(vectors)) {
  if (width < 1 || height < 1) throw Error(ErrorKind::DimensionMismatch, "empty flow field");
  if (vectors_.size() != 2 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::DimensionMismatch, "flow payload does not match its dimensions");
  }
  if (!std::all_of(vectors_.begin(), vectors_.end(), [](float v) { return std::isfinite(v); })) {
    throw Error(ErrorKind::Format, "flow field contains non-finite components");
  }
}

Point2 FlowField::sample(double x, double y) const noexcept {
  x = std::clamp(x, 0.0, static_cast<double>(width_ - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height_ - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  Point2 out;
  for (int c = 0; c < 2; ++c) {
    const double v00 = vectors_[offset(x0, y0) + c];
    const double v10 = vectors_[offset(x1, y0) + c];
    const double v01 = vectors_[offset(x0, y1) + c];
    const double v11 = vectors_[offset(x1, y1) + c];
    const double top = v00 + fx * (v10 - v00);
    const double bottom = v01 + fx * (v11 - v01);
    out[c] = top + fy * (bottom - top);
  }
  return out;
}

namespace io {

namespace {

constexpr char kFlowTag[4] = {'P', 'I', 'E', 'H'};

}  // namespace

FlowField load_flow_field(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open flow file " + file.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12) {
    throw Error(ErrorKind::Format, "flow file " + file.string() + " is truncated (no header)");
  }
  if (std::memcmp(bytes.data(), kFlowTag, 4) != 0) {
    throw Error(ErrorKind::Format, "flow file " + file.string() + " has a bad magic tag");
  }
  std::int32_t width = 0;
  std::int32_t height = 0;
  std::memcpy(&width, bytes.data() + 4, 4);
  std::memcpy(&height, bytes.data() + 8, 4);
  if (width < 1 || height < 1 || width > (1 << 16) || height > (1 << 16)) {
    throw Error(ErrorKind::Format, "flow file " + file.string() + " has invalid dimensions");
  }
  const std::size_t count = 2 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < 12 + count * sizeof(float)) {
    throw Error(ErrorKind::Format, "flow file " + file.string() + " is truncated: expected " +
                                       std::to_string(12 + count * sizeof(float)) + " bytes, got " +
                                       std::to_string(bytes.size()));
  }
  std::vector<float> vectors(count);
  std::memcpy(vectors.data(), bytes.data() + 12, count * sizeof(float));
  return FlowField(width, height, std::move(vectors));
}

void write_flow_field(const std::filesystem::path& file, const FlowField& flow) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write flow file " + file.string());
  const std::int32_t width = flow.width();
  const std::int32_t height = flow.height();
  out.write(kFlowTag, 4);
  out.write(reinterpret_cast<const char*>(&width), 4);
  out.write(reinterpret_cast<const char*>(&height), 4);
  const auto vectors = flow.vectors();
  out.write(reinterpret_cast<const char*>(vectors.data()),
            static_cast<std::streamsize>(vectors.size() * sizeof(float)));
  if (!out) throw Error(ErrorKind::Io, "failed writing flow file " + file.string());
}

}  // namespace io
}  // namespace reenact
