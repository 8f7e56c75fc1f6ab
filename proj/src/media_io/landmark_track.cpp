#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "reenact/error.hpp"
#include "reenact/media_io.hpp"

namespace reenact::io {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_double(std::string_view field, bool& ok) {
  std::string copy(field);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  ok = end == copy.c_str() + copy.size() && !copy.empty();
  return value;
}

}  // namespace

std::vector<LandmarkShape> parse_landmark_track(std::string_view text, int expected_frames,
                                                std::string_view source_name) {
  std::vector<LandmarkShape> shapes;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;

    const std::string where = std::string(source_name) + ":" + std::to_string(line_number) +
                              " (record " + std::to_string(shapes.size()) + ")";
    constexpr std::size_t kFields = 1 + 2 * kLandmarkCount;
    if (fields.size() != kFields) {
      throw Error(ErrorKind::Format, where + ": expected frame index and 66 points, got " +
                                         std::to_string((fields.size() - 1) / 2) + " points (" +
                                         std::to_string(fields.size()) + " fields)");
    }
    bool ok = false;
    const double index_value = parse_double(fields[0], ok);
    if (!ok || index_value != std::floor(index_value) || index_value < 0) {
      throw Error(ErrorKind::Format, where + ": invalid frame index '" + std::string(fields[0]) + "'");
    }
    LandmarkShape shape;
    shape.frame_index = static_cast<int>(index_value);
    if (shape.frame_index != static_cast<int>(shapes.size())) {
      throw Error(ErrorKind::Format, where + ": frame index " + std::to_string(shape.frame_index) +
                                         " out of order, expected " + std::to_string(shapes.size()));
    }
    for (int i = 0; i < kLandmarkCount; ++i) {
      const double x = parse_double(fields[1 + 2 * i], ok);
      const bool ok_x = ok;
      const double y = parse_double(fields[2 + 2 * i], ok);
      if (!ok_x || !ok || !std::isfinite(x) || !std::isfinite(y)) {
        throw Error(ErrorKind::Format,
                    where + ": landmark " + std::to_string(i) + " is not a finite coordinate pair");
      }
      shape.points[static_cast<std::size_t>(i)] = Point2(x, y);
    }
    shapes.push_back(shape);
  }
  if (static_cast<int>(shapes.size()) != expected_frames) {
    throw Error(ErrorKind::CountMismatch, std::string(source_name) + ": track has " +
                                              std::to_string(shapes.size()) + " records, expected " +
                                              std::to_string(expected_frames));
  }
  return shapes;
}

std::vector<LandmarkShape> load_landmark_track(const std::filesystem::path& file,
                                               int expected_frames) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot open landmark track " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_landmark_track(buffer.str(), expected_frames, file.string());
}

void write_landmark_track(const std::filesystem::path& file, std::span<const LandmarkShape> shapes) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::Io, "cannot write landmark track " + file.string());
  out.precision(17);
  for (const auto& shape : shapes) {
    out << shape.frame_index;
    for (const auto& p : shape.points) out << ' ' << p.x() << ' ' << p.y();
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing landmark track " + file.string());
}

}  // namespace reenact::io
