#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <string>
#include <system_error>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "reenact/error.hpp"
#include "reenact/media_io.hpp"

namespace fs = std::filesystem;

namespace reenact::io {

namespace {

bool is_image_extension(std::string ext) {
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

/// Parses the index out of `<prefix>NNNNNN<ext>`; returns -1 if the name does not match.
int parse_index(const fs::path& file, std::string_view prefix) {
  if (!is_image_extension(file.extension().string())) return -1;
  const std::string stem = file.stem().string();
  if (stem.size() != prefix.size() + kIndexDigits || stem.compare(0, prefix.size(), prefix) != 0) {
    return -1;
  }
  const char* first = stem.data() + prefix.size();
  const char* last = stem.data() + stem.size();
  if (!std::all_of(first, last, [](char c) { return c >= '0' && c <= '9'; })) return -1;
  int index = -1;
  std::from_chars(first, last, index);
  return index;
}

}  // namespace

fs::path indexed_path(const fs::path& dir, std::string_view prefix, int index,
                      std::string_view extension) {
  char digits[16];
  std::snprintf(digits, sizeof digits, "%0*d", kIndexDigits, index);
  return dir / (std::string(prefix) + digits + std::string(extension));
}

ImageBuffer read_image(const fs::path& file) {
  cv::Mat mat = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw Error(ErrorKind::Io, "cannot decode image " + file.string());
  if (mat.depth() != CV_8U) {
    throw Error(ErrorKind::Format, "image " + file.string() + " is not 8-bit");
  }
  const int src_channels = mat.channels();
  if (src_channels != 1 && src_channels != 3 && src_channels != 4) {
    throw Error(ErrorKind::Format, "image " + file.string() + " has " +
                                       std::to_string(src_channels) + " channels");
  }
  const int channels = src_channels == 1 ? 1 : 3;
  ImageBuffer image(mat.cols, mat.rows, channels);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) {
      const auto* px = row + static_cast<std::ptrdiff_t>(x) * src_channels;
      if (channels == 1) {
        image.at(x, y) = px[0];
      } else {
        // OpenCV stores BGR(A)
        image.at(x, y, 0) = px[2];
        image.at(x, y, 1) = px[1];
        image.at(x, y, 2) = px[0];
      }
    }
  }
  return image;
}

void write_image(const fs::path& file, const ImageBuffer& image) {
  cv::Mat out(image.height(), image.width(), image.channels() == 1 ? CV_8UC1 : CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = out.ptr<std::uint8_t>(y);
    for (int x = 0; x < image.width(); ++x) {
      if (image.channels() == 1) {
        row[x] = image.at(x, y);
      } else {
        row[3 * x + 0] = image.at(x, y, 2);
        row[3 * x + 1] = image.at(x, y, 1);
        row[3 * x + 2] = image.at(x, y, 0);
      }
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(file.string(), out);
  } catch (const cv::Exception& e) {
    throw Error(ErrorKind::Io, "cannot write image " + file.string() + ": " + e.what());
  }
  if (!ok) throw Error(ErrorKind::Io, "cannot write image " + file.string());
}

std::vector<ImageBuffer> load_frame_sequence(const fs::path& dir, std::string_view prefix) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::Io, "frame directory " + dir.string() + " does not exist");
  }
  std::map<int, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const int index = parse_index(entry.path(), prefix);
    if (index < 0) continue;
    if (!files.emplace(index, entry.path()).second) {
      throw Error(ErrorKind::Format, "frame index " + std::to_string(index) +
                                         " present with several extensions in " + dir.string());
    }
  }
  if (files.empty()) {
    throw Error(ErrorKind::EmptySequence, "no frames matching " + std::string(prefix) +
                                              "NNNNNN in " + dir.string());
  }

  std::vector<ImageBuffer> frames;
  frames.reserve(files.size());
  int expected = 0;
  for (const auto& [index, file] : files) {
    if (index != expected) {
      throw Error(ErrorKind::SequenceGap,
                  "frame sequence " + dir.string() + " is missing index " + std::to_string(expected));
    }
    frames.push_back(read_image(file));
    if (!frames.back().same_shape(frames.front())) {
      throw Error(ErrorKind::DimensionMismatch,
                  "frame " + std::to_string(index) + " in " + dir.string() +
                      " differs in size or channel count from frame 0");
    }
    ++expected;
  }
  return frames;
}

void write_frame_sequence(std::span<const ImageBuffer> frames, const fs::path& dir,
                          std::string_view prefix) {
  if (frames.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_image(indexed_path(dir, prefix, static_cast<int>(i), ".png"), frames[i]);
  }
}

}  // namespace reenact::io
