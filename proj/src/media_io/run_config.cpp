#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "reenact/error.hpp"
#include "reenact/media_io.hpp"

namespace fs = std::filesystem;

namespace reenact {

namespace {

constexpr double kWeightTolerance = 1e-9;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Config, "key '" + key + "': '" + value + "' is not a finite number");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != std::floor(v)) throw Error(ErrorKind::Config, "key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

template <std::size_t N>
std::array<double, N> to_doubles(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != N) {
    throw Error(ErrorKind::Config, "key '" + key + "' needs " + std::to_string(N) +
                                       " comma-separated values");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = to_double(key, parts[i]);
  return out;
}

/// "0-16" or "36,37,38" or a mix of both.
std::vector<int> to_indices(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& part : split(value, ',')) {
    const auto dash = part.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(to_int(key, part));
      continue;
    }
    const int first = to_int(key, trim(part.substr(0, dash)));
    const int last = to_int(key, trim(part.substr(dash + 1)));
    if (last < first) throw Error(ErrorKind::Config, "key '" + key + "': empty range " + part);
    for (int i = first; i <= last; ++i) out.push_back(i);
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorKind::Config, "key '" + key + "' expects true/false");
}

std::string join_indices(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

template <std::size_t N>
std::string join_doubles(const std::array<double, N>& v) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out << ',';
    out << v[i];
  }
  return out.str();
}

void check_sum(const char* name, double sum) {
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << name << " must sum to 1, got " << sum;
    throw Error(ErrorKind::Config, msg.str());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (source_dir.empty() || target_dir.empty() || output_dir.empty()) {
    throw Error(ErrorKind::Config, "source_dir, target_dir and output_dir are required");
  }
  groups.validate();
  double sum = 0;
  for (double w : region_weights) {
    if (w < 0) throw Error(ErrorKind::Config, "region_weights must be non-negative");
    sum += w;
  }
  check_sum("region_weights", sum);
  sum = 0;
  for (double a : alpha) {
    if (a < 0) throw Error(ErrorKind::Config, "alpha must be non-negative");
    sum += a;
  }
  check_sum("alpha", sum);
  if (w_nr < 0 || w_r < 0) throw Error(ErrorKind::Config, "w_nr and w_r must be non-negative");
  check_sum("w_nr + w_r", w_nr + w_r);
  if (tau < 0) throw Error(ErrorKind::Config, "tau must be non-negative");
  if (seam_sigma <= 0) throw Error(ErrorKind::Config, "seam_sigma must be positive");
  if (erosion_sigma <= 0) throw Error(ErrorKind::Config, "erosion_sigma must be positive");
  if (roi_padding < 0) throw Error(ErrorKind::Config, "roi_padding must be non-negative");
  if (stabilize_radius < 1 || stabilize_points < 1) {
    throw Error(ErrorKind::Config, "stabilize_radius and stabilize_points must be >= 1");
  }
}

RunConfig parse_run_config(std::string_view text, const fs::path& base_dir) {
  RunConfig config;
  bool has_source_landmarks = false;
  bool has_target_landmarks = false;
  auto resolve = [&](const std::string& value) {
    fs::path p(value);
    return p.is_absolute() ? p : base_dir / p;
  };

  const std::map<std::string, std::function<void(const std::string&, const std::string&)>,
                 std::less<>>
      handlers{
          {"source_dir", [&](auto&, auto& v) { config.source_dir = resolve(v); }},
          {"target_dir", [&](auto&, auto& v) { config.target_dir = resolve(v); }},
          {"output_dir", [&](auto&, auto& v) { config.output_dir = resolve(v); }},
          {"source_landmarks",
           [&](auto&, auto& v) {
             config.source_landmarks = resolve(v);
             has_source_landmarks = true;
           }},
          {"target_landmarks",
           [&](auto&, auto& v) {
             config.target_landmarks = resolve(v);
             has_target_landmarks = true;
           }},
          {"source_flow_dir", [&](auto&, auto& v) { config.source_flow_dir = resolve(v); }},
          {"target_flow_dir", [&](auto&, auto& v) { config.target_flow_dir = resolve(v); }},
          {"color_matrices", [&](auto&, auto& v) { config.color_matrices = resolve(v); }},
          {"cache_dir", [&](auto&, auto& v) { config.cache_dir = resolve(v); }},
          {"groups.outline", [&](auto& k, auto& v) { config.groups.outline = to_indices(k, v); }},
          {"groups.brows", [&](auto& k, auto& v) { config.groups.brows = to_indices(k, v); }},
          {"groups.nose", [&](auto& k, auto& v) { config.groups.nose = to_indices(k, v); }},
          {"groups.left_eye", [&](auto& k, auto& v) { config.groups.left_eye = to_indices(k, v); }},
          {"groups.right_eye",
           [&](auto& k, auto& v) { config.groups.right_eye = to_indices(k, v); }},
          {"groups.mouth", [&](auto& k, auto& v) { config.groups.mouth = to_indices(k, v); }},
          {"region_weights", [&](auto& k, auto& v) { config.region_weights = to_doubles<4>(k, v); }},
          {"tau", [&](auto& k, auto& v) { config.tau = to_double(k, v); }},
          {"alpha", [&](auto& k, auto& v) { config.alpha = to_doubles<3>(k, v); }},
          {"w_nr", [&](auto& k, auto& v) { config.w_nr = to_double(k, v); }},
          {"w_r", [&](auto& k, auto& v) { config.w_r = to_double(k, v); }},
          {"seam_sigma", [&](auto& k, auto& v) { config.seam_sigma = to_double(k, v); }},
          {"erosion_sigma", [&](auto& k, auto& v) { config.erosion_sigma = to_double(k, v); }},
          {"roi_padding", [&](auto& k, auto& v) { config.roi_padding = to_int(k, v); }},
          {"stabilize_radius", [&](auto& k, auto& v) { config.stabilize_radius = to_int(k, v); }},
          {"stabilize_points", [&](auto& k, auto& v) { config.stabilize_points = to_int(k, v); }},
          {"temporal_clustering",
           [&](auto& k, auto& v) { config.temporal_clustering = to_bool(k, v); }},
      };

  std::size_t line_number = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_number;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config,
                  "line " + std::to_string(line_number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto handler = handlers.find(key);
    if (handler == handlers.end()) {
      throw Error(ErrorKind::Config,
                  "line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
    handler->second(key, value);
  }

  if (!has_source_landmarks && !config.source_dir.empty()) {
    config.source_landmarks = config.source_dir / "landmarks.txt";
  }
  if (!has_target_landmarks && !config.target_dir.empty()) {
    config.target_landmarks = config.target_dir / "landmarks.txt";
  }
  config.validate();
  return config;
}

RunConfig load_run_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), fs::absolute(file).parent_path());
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "source_dir = " << c.source_dir.string() << '\n'
      << "target_dir = " << c.target_dir.string() << '\n'
      << "output_dir = " << c.output_dir.string() << '\n'
      << "source_landmarks = " << c.source_landmarks.string() << '\n'
      << "target_landmarks = " << c.target_landmarks.string() << '\n';
  if (c.source_flow_dir) out << "source_flow_dir = " << c.source_flow_dir->string() << '\n';
  if (c.target_flow_dir) out << "target_flow_dir = " << c.target_flow_dir->string() << '\n';
  if (c.color_matrices) out << "color_matrices = " << c.color_matrices->string() << '\n';
  if (c.cache_dir) out << "cache_dir = " << c.cache_dir->string() << '\n';
  out << "groups.outline = " << join_indices(c.groups.outline) << '\n'
      << "groups.brows = " << join_indices(c.groups.brows) << '\n'
      << "groups.nose = " << join_indices(c.groups.nose) << '\n'
      << "groups.left_eye = " << join_indices(c.groups.left_eye) << '\n'
      << "groups.right_eye = " << join_indices(c.groups.right_eye) << '\n'
      << "groups.mouth = " << join_indices(c.groups.mouth) << '\n'
      << "region_weights = " << join_doubles(c.region_weights) << '\n'
      << "tau = " << c.tau << '\n'
      << "alpha = " << join_doubles(c.alpha) << '\n'
      << "w_nr = " << c.w_nr << '\n'
      << "w_r = " << c.w_r << '\n'
      << "seam_sigma = " << c.seam_sigma << '\n'
      << "erosion_sigma = " << c.erosion_sigma << '\n'
      << "roi_padding = " << c.roi_padding << '\n'
      << "stabilize_radius = " << c.stabilize_radius << '\n'
      << "stabilize_points = " << c.stabilize_points << '\n'
      << "temporal_clustering = " << (c.temporal_clustering ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace reenact
