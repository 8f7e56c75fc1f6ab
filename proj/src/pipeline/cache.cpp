#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "reenact/pipeline.hpp"

namespace reenact::pipeline {

namespace {

constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

using nlohmann::json;

json span_to_json(const matching::ClusterSpan& s) { return json::array({s.start, s.end}); }

matching::ClusterSpan span_from_json(const json& j) {
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

}  // namespace

ContentHash& ContentHash::update(std::span<const std::uint8_t> bytes) noexcept {
  for (const std::uint8_t b : bytes) {
    state_ ^= b;
    state_ *= kFnvPrime;
  }
  return *this;
}

ContentHash& ContentHash::update(std::string_view text) noexcept {
  update(static_cast<std::int64_t>(text.size()));
  return update(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ContentHash& ContentHash::update(double value) noexcept {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  std::uint8_t bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(bits >> (8 * i));
  return update(std::span<const std::uint8_t>(bytes));
}

ContentHash& ContentHash::update(std::int64_t value) noexcept {
  const auto bits = static_cast<std::uint64_t>(value);
  std::uint8_t bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(bits >> (8 * i));
  return update(std::span<const std::uint8_t>(bytes));
}

std::string ContentHash::hex() const {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << state_;
  return out.str();
}

std::filesystem::path resolve_cache_dir(const RunConfig& config) {
  if (const char* env = std::getenv(kCacheDirEnv); env != nullptr && *env != '\0') return env;
  if (config.cache_dir) return *config.cache_dir;
  return config.output_dir / "cache";
}

void write_matching_json(const std::filesystem::path& file,
                         const matching::MatchingResult& result) {
  json merges = json::array();
  for (const auto& m : result.clustering.merge_log) {
    merges.push_back({{"left", span_to_json(m.left)},
                      {"right", span_to_json(m.right)},
                      {"linkage", m.linkage},
                      {"left_variance", m.left_variance},
                      {"right_variance", m.right_variance},
                      {"merged_variance", m.merged_variance},
                      {"accepted", m.accepted}});
  }
  json spans = json::array();
  for (const auto& s : result.clustering.spans) spans.push_back(span_to_json(s));
  json assignments = json::array();
  for (const auto& a : result.assignments) {
    assignments.push_back({{"cluster", a.cluster},
                           {"span", span_to_json(a.span)},
                           {"source_index", a.source_index},
                           {"appearance", a.appearance},
                           {"motion", a.motion},
                           {"total", a.total},
                           {"candidate_appearance", a.candidate_appearance},
                           {"candidate_motion", a.candidate_motion}});
  }
  const json doc{{"spans", spans}, {"merge_log", merges}, {"assignments", assignments}};

  std::ofstream out(file, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
  out << doc.dump(1) << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing " + file.string());
}

matching::MatchingResult read_matching_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::CacheMissing, "no cached matching at " + file.string());
  matching::MatchingResult result;
  try {
    const json doc = json::parse(in);
    for (const auto& s : doc.at("spans")) result.clustering.spans.push_back(span_from_json(s));
    for (const auto& m : doc.at("merge_log")) {
      matching::MergeEvent e;
      e.left = span_from_json(m.at("left"));
      e.right = span_from_json(m.at("right"));
      e.linkage = m.at("linkage").get<double>();
      e.left_variance = m.at("left_variance").get<double>();
      e.right_variance = m.at("right_variance").get<double>();
      e.merged_variance = m.at("merged_variance").get<double>();
      e.accepted = m.at("accepted").get<bool>();
      result.clustering.merge_log.push_back(e);
    }
    for (const auto& a : doc.at("assignments")) {
      matching::MatchAssignment m;
      m.cluster = a.at("cluster").get<int>();
      m.span = span_from_json(a.at("span"));
      m.source_index = a.at("source_index").get<int>();
      m.appearance = a.at("appearance").get<double>();
      m.motion = a.at("motion").get<double>();
      m.total = a.at("total").get<double>();
      m.candidate_appearance = a.at("candidate_appearance").get<std::vector<double>>();
      m.candidate_motion = a.at("candidate_motion").get<std::vector<double>>();
      result.assignments.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, file.string() + ": " + e.what());
  }
  return result;
}

}  // namespace reenact::pipeline
