#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reenact/error.hpp"
#include "reenact/feature_lbp.hpp"
#include "reenact/matcher.hpp"
#include "reenact/media_io.hpp"

namespace reenact::pipeline {

/// Failure of one pipeline stage. `what()` reads "[stage] frame 12: message".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, ErrorKind kind, const std::string& message);

  const std::string& stage() const noexcept { return stage_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string stage_;
  ErrorKind kind_;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Per-frame outcome of transfer and compositing.
struct FrameRecord {
  int frame = 0;
  int source_before = 0;
  int source_after = 0;
  double beta2 = 0.0;
  std::size_t mask_area = 0;
  int poisson_iterations = 0;
};

struct PipelineReport {
  std::string mode;
  int target_frames = 0;
  int source_frames = 0;
  matching::MatchingResult matching;
  std::optional<int> mismatches;
  std::vector<FrameRecord> frames;
  bool features_cached = false;
  bool matching_cached = false;
  std::vector<StageTiming> timings;

  int cluster_count() const noexcept { return static_cast<int>(matching.clustering.spans.size()); }
  std::vector<int> cluster_lengths() const;
  double mismatch_rate() const;
};

struct RunOptions {
  int workers = 0;  // < 1: available parallelism
  /// Also write each frame's composite mask to `<output_dir>/masks/mask_*.png`.
  bool write_masks = false;
};

/// Environment variable that overrides the cache directory.
inline constexpr const char* kCacheDirEnv = "REENACT_CACHE_DIR";

/// Stabilize, align, extract features, match, transfer and composite every target
/// frame. Writes `frame_*.png`, `report.txt` and `timing.txt` to the output directory.
PipelineReport cmd_reenact(const RunConfig& config, const RunOptions& options = {});

/// Matching only, on a sequence against itself; counts selections outside their
/// own cluster. Requires source_dir == target_dir.
PipelineReport cmd_validate_self(const RunConfig& config, const RunOptions& options = {});

/// Writes `diagnostics/clusters.csv`, `diagnostics/candidates.csv` and one
/// `strip_<cluster>.png` (target centre frame beside the selected source frame)
/// per cluster from the cached matching. Throws StageError(CacheMissing) if no
/// run has populated the cache for these inputs.
std::vector<std::filesystem::path> cmd_dump_diagnostics(const RunConfig& config,
                                                        const RunOptions& options = {});

/// Deterministic structured text: one `[section]` per stage, `key = value` lines.
std::string format_report(const PipelineReport& report);
std::string format_timings(std::span<const StageTiming> timings);

/// 64-bit FNV-1a, used to key cached intermediate results.
class ContentHash {
 public:
  ContentHash& update(std::span<const std::uint8_t> bytes) noexcept;
  /// Length-prefixed, so consecutive strings cannot alias each other.
  ContentHash& update(std::string_view text) noexcept;
  ContentHash& update(double value) noexcept;
  ContentHash& update(std::int64_t value) noexcept;

  std::uint64_t value() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Cache directory: $REENACT_CACHE_DIR, else config.cache_dir, else <output_dir>/cache.
std::filesystem::path resolve_cache_dir(const RunConfig& config);

void write_matching_json(const std::filesystem::path& file, const matching::MatchingResult& result);
matching::MatchingResult read_matching_json(const std::filesystem::path& file);

}  // namespace reenact::pipeline
