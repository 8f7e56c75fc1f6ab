#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "reenact/composite.hpp"
#include "reenact/landmark_core.hpp"
#include "reenact/parallel.hpp"
#include "reenact/pipeline.hpp"
#include "reenact/transfer.hpp"

namespace reenact::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCacheVersion = "reenact-cache-1";

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <typename F>
  decltype(auto) run(const std::string& stage, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      StageClock& clock;
      const std::string& stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        clock.sink_.push_back({stage, elapsed.count()});
      }
    } record{*this, stage, start};
    try {
      return body();
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(stage, e.kind(), e.what());
    }
  }

 private:
  std::vector<StageTiming>& sink_;
};

/// Rethrows a module error with the frame (or cluster) it occurred in.
template <typename F>
decltype(auto) at_index(std::string_view what, int index, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(what) + " " + std::to_string(index) + ": " + e.what());
  }
}

struct Inputs {
  std::vector<ImageBuffer> target_frames;
  std::vector<ImageBuffer> source_frames;
  std::vector<LandmarkShape> target_shapes;
  std::vector<LandmarkShape> source_shapes;
  bool same_sequence = false;
};

bool same_path(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  const auto ca = fs::weakly_canonical(a, ec);
  const auto cb = fs::weakly_canonical(b, ec);
  return ca == cb;
}

std::vector<FlowField> load_flow_sequence(const fs::path& dir, int count, int width, int height) {
  std::vector<FlowField> flows;
  flows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto file = io::indexed_path(dir, io::kFlowPrefix, i, ".flo");
    if (!fs::exists(file)) {
      throw Error(ErrorKind::SequenceGap, "missing flow field " + file.string());
    }
    flows.push_back(io::load_flow_field(file));
    if (flows.back().width() != width || flows.back().height() != height) {
      throw Error(ErrorKind::DimensionMismatch,
                  file.string() + " does not match the frame dimensions");
    }
  }
  return flows;
}

void load_sequence(const fs::path& dir, const fs::path& landmarks,
                   std::vector<ImageBuffer>& frames, std::vector<LandmarkShape>& shapes) {
  frames = io::load_frame_sequence(dir);
  shapes = io::load_landmark_track(landmarks, static_cast<int>(frames.size()));
}

Inputs load_inputs(const RunConfig& config, StageClock& clock) {
  Inputs in;
  clock.run("media_io", [&] {
    config.validate();
    in.same_sequence = same_path(config.source_dir, config.target_dir) &&
                       same_path(config.source_landmarks, config.target_landmarks);
    load_sequence(config.target_dir, config.target_landmarks, in.target_frames, in.target_shapes);
    if (in.same_sequence) {
      in.source_frames = in.target_frames;
      in.source_shapes = in.target_shapes;
    } else {
      load_sequence(config.source_dir, config.source_landmarks, in.source_frames, in.source_shapes);
    }
    if (in.source_frames.front().channels() != in.target_frames.front().channels()) {
      throw Error(ErrorKind::DimensionMismatch, "source and target frames differ in channel count");
    }
  });

  clock.run("landmark_core", [&] {
    auto stabilize = [&](const std::optional<fs::path>& dir, std::vector<LandmarkShape>& shapes,
                         const std::vector<ImageBuffer>& frames) {
      if (!dir) return;
      const auto flows = load_flow_sequence(*dir, static_cast<int>(frames.size()),
                                            frames.front().width(), frames.front().height());
      for (std::size_t i = 0; i < shapes.size(); ++i) {
        shapes[i] = at_index("frame", static_cast<int>(i), [&] {
          return landmarks::stabilize_landmarks(shapes[i], flows[i], config.stabilize_radius,
                                                config.stabilize_points);
        });
      }
    };
    stabilize(config.target_flow_dir, in.target_shapes, in.target_frames);
    if (in.same_sequence && config.source_flow_dir == config.target_flow_dir) {
      in.source_shapes = in.target_shapes;
    } else {
      stabilize(config.source_flow_dir, in.source_shapes, in.source_frames);
    }
  });
  return in;
}

void hash_frames(ContentHash& h, std::span<const ImageBuffer> frames) {
  h.update(static_cast<std::int64_t>(frames.size()));
  for (const auto& f : frames) {
    h.update(static_cast<std::int64_t>(f.width()))
        .update(static_cast<std::int64_t>(f.height()))
        .update(static_cast<std::int64_t>(f.channels()))
        .update(f.data());
  }
}

void hash_shapes(ContentHash& h, std::span<const LandmarkShape> shapes) {
  h.update(static_cast<std::int64_t>(shapes.size()));
  for (const auto& s : shapes) {
    for (const auto& p : s.points) h.update(p.x()).update(p.y());
  }
}

void hash_groups(ContentHash& h, const LandmarkGroups& g) {
  for (const auto* group : {&g.outline, &g.brows, &g.nose, &g.left_eye, &g.right_eye, &g.mouth}) {
    h.update(static_cast<std::int64_t>(group->size()));
    for (int i : *group) h.update(static_cast<std::int64_t>(i));
  }
}

struct CacheKeys {
  std::string features;
  std::string matching;
};

CacheKeys cache_keys(const RunConfig& config, const Inputs& in) {
  ContentHash h;
  h.update(kCacheVersion);
  hash_frames(h, in.target_frames);
  hash_shapes(h, in.target_shapes);
  hash_frames(h, in.source_frames);
  hash_shapes(h, in.source_shapes);
  hash_groups(h, config.groups);
  h.update(static_cast<std::int64_t>(config.roi_padding));
  CacheKeys keys{h.hex(), {}};
  for (double w : config.region_weights) h.update(w);
  h.update(config.tau).update(static_cast<std::int64_t>(config.temporal_clustering));
  keys.matching = h.hex();
  return keys;
}

struct Analysis {
  LandmarkShape reference;
  std::vector<LandmarkShape> target_normalized;
  std::vector<LandmarkShape> source_normalized;
  matching::MatchingResult matching;
  bool features_cached = false;
  bool matching_cached = false;
};

std::vector<lbp::FrameFeatures> extract_sequence(std::span<const ImageBuffer> frames,
                                                 std::span<const LandmarkShape> shapes,
                                                 const LandmarkShape& reference,
                                                 const landmarks::RegionLayout& layout,
                                                 int workers) {
  std::vector<lbp::FrameFeatures> out(frames.size());
  parallel_for(frames.size(), workers, [&](std::size_t i) {
    out[i] = at_index("frame", static_cast<int>(i), [&] {
      const auto to_reference = landmarks::fit_affine(shapes[i].points, reference.points);
      const auto aligned = landmarks::warp_affine(frames[i], to_reference, layout.image_width,
                                                  layout.image_height);
      return lbp::extract_features(aligned, layout);
    });
  });
  return out;
}

std::optional<std::vector<lbp::FrameFeatures>> try_read_features(const fs::path& file,
                                                                 std::size_t expected) {
  if (!fs::exists(file)) return std::nullopt;
  try {
    auto features = lbp::read_descriptors(file);
    if (features.size() == expected) return features;
  } catch (const Error&) {
  }
  return std::nullopt;
}

Analysis analyze(const RunConfig& config, const Inputs& in, int workers, StageClock& clock) {
  Analysis a;
  const fs::path cache_dir = resolve_cache_dir(config);
  const CacheKeys keys = cache_keys(config, in);
  const fs::path matching_file = cache_dir / (keys.matching + "-matching.json");

  clock.run("landmark_core", [&] {
    a.reference = in.source_shapes.front();
    auto normalize = [&](std::span<const LandmarkShape> shapes) {
      std::vector<LandmarkShape> aligned;
      aligned.reserve(shapes.size());
      for (const auto& s : shapes) {
        aligned.push_back(at_index("frame", s.frame_index,
                                   [&] { return landmarks::align_to_reference(s, a.reference); }));
      }
      return matching::normalize_shapes(aligned, a.reference);
    };
    a.target_normalized = normalize(in.target_shapes);
    a.source_normalized = in.same_sequence ? a.target_normalized : normalize(in.source_shapes);
  });

  if (fs::exists(matching_file)) {
    try {
      a.matching = read_matching_json(matching_file);
      a.matching_cached = true;
      a.features_cached = true;
      return a;
    } catch (const Error&) {
    }
  }

  std::vector<lbp::FrameFeatures> target_features;
  std::vector<lbp::FrameFeatures> source_features;
  clock.run("feature_lbp", [&] {
    const fs::path target_file = cache_dir / (keys.features + "-target.rlbp");
    const fs::path source_file = cache_dir / (keys.features + "-source.rlbp");
    auto cached_target = try_read_features(target_file, in.target_frames.size());
    auto cached_source = in.same_sequence
                             ? cached_target
                             : try_read_features(source_file, in.source_frames.size());
    if (cached_target && cached_source) {
      target_features = std::move(*cached_target);
      source_features = std::move(*cached_source);
      a.features_cached = true;
      return;
    }
    const auto& ref_frame = in.source_frames.front();
    const auto layout = landmarks::compute_rois(a.reference, config.groups, config.roi_padding,
                                                ref_frame.width(), ref_frame.height());
    target_features =
        extract_sequence(in.target_frames, in.target_shapes, a.reference, layout, workers);
    source_features = in.same_sequence ? target_features
                                       : extract_sequence(in.source_frames, in.source_shapes,
                                                          a.reference, layout, workers);
    fs::create_directories(cache_dir);
    lbp::write_descriptors(target_file, target_features);
    if (!in.same_sequence) lbp::write_descriptors(source_file, source_features);
  });

  clock.run("matcher", [&] {
    const auto self = matching::pairwise_distances(target_features, target_features,
                                                   config.region_weights, workers);
    const auto cross = in.same_sequence
                           ? self
                           : matching::pairwise_distances(target_features, source_features,
                                                          config.region_weights, workers);
    a.matching = matching::run_matching(self, cross, a.target_normalized, a.source_normalized,
                                        {config.tau, config.temporal_clustering});
    fs::create_directories(cache_dir);
    write_matching_json(matching_file, a.matching);
  });
  return a;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "failed writing " + file.string());
}

void write_outputs(const RunConfig& config, const PipelineReport& report) {
  fs::create_directories(config.output_dir);
  write_text(config.output_dir / "report.txt", format_report(report));
  std::string timing = format_timings(report.timings);
  timing += std::string("features_cached = ") + (report.features_cached ? "yes" : "no") + '\n';
  timing += std::string("matching_cached = ") + (report.matching_cached ? "yes" : "no") + '\n';
  write_text(config.output_dir / "timing.txt", timing);
}

struct Synthesis {
  ImageBuffer frame;
  BinaryMask mask;
  FrameRecord record;
};

ImageBuffer mask_image(const BinaryMask& mask) {
  ImageBuffer out(mask.width(), mask.height(), 1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) out.at(x, y) = mask.get(x, y) ? 255 : 0;
  }
  return out;
}

class FrameSynthesizer {
 public:
  FrameSynthesizer(const RunConfig& config, const Inputs& in, const Analysis& a)
      : config_(config), in_(in), a_(a) {
    color_ = config.color_matrices ? composite::ColorTransform::load(*config.color_matrices)
                                   : composite::ColorTransform::defaults();
    weights_ = {config.alpha, config.w_nr, config.w_r};
  }

  /// Runs once before the per-frame work; errors belong to the transfer stage.
  void prepare_transfer() { mesh_ = landmarks::triangulate_reference(a_.reference); }

  void prepare_composite() {
    const auto& ref_frame = in_.source_frames.front();
    source_mask_ = composite::build_source_mask(a_.reference, config_.groups, ref_frame.width(),
                                                ref_frame.height(), config_.erosion_sigma);
  }

  Synthesis run(int t, std::string& failed_stage) const {
    const auto& target = in_.target_frames[static_cast<std::size_t>(t)];
    const int w = target.width();
    const int h = target.height();
    const auto& assignments = a_.matching.assignments;

    failed_stage = "transfer";
    const auto bracket = transfer::bracket_frame(t, assignments);
    const int before = assignments[bracket.before].source_index;
    const int after = assignments[bracket.after].source_index;
    const auto& shape_before = in_.source_shapes[static_cast<std::size_t>(before)];
    const auto& shape_after = in_.source_shapes[static_cast<std::size_t>(after)];
    const auto reenact = transfer::reenact_shape(t, in_.target_shapes, shape_before, shape_after,
                                                 bracket.betas, weights_);
    const auto warp = transfer::transfer_appearance(
        in_.source_frames[static_cast<std::size_t>(before)], shape_before,
        in_.source_frames[static_cast<std::size_t>(after)], shape_after, reenact, bracket.betas,
        mesh_, w, h);

    failed_stage = "composite";
    BinaryMask mask = composite::transfer_mask(source_mask_, a_.reference.points, reenact.points,
                                               mesh_, w, h) &
                      erode_4(warp.coverage);
    mask = composite::clip_to_target(mask, in_.target_shapes[static_cast<std::size_t>(t)],
                                     config_.groups, config_.erosion_sigma);

    FloatImage cloned;
    int iterations = 0;
    if (target.channels() == 3) {
      const auto result = composite::poisson_clone(composite::rgb_to_perceptual(warp.image, color_),
                                                   composite::rgb_to_perceptual(target, color_),
                                                   mask);
      cloned = composite::perceptual_to_rgb(result.image, color_);
      iterations = result.iterations;
    } else {
      const auto result = composite::poisson_clone(to_float(warp.image), to_float(target), mask);
      cloned = result.image;
      iterations = result.iterations;
    }
    Synthesis out{composite::feather_seam(cloned, target, mask, config_.seam_sigma), mask,
                  {t, before, after, bracket.betas.beta2, mask.area(), iterations}};
    failed_stage.clear();
    return out;
  }

 private:
  const RunConfig& config_;
  const Inputs& in_;
  const Analysis& a_;
  composite::ColorTransform color_;
  transfer::ShapeWeights weights_;
  landmarks::TriangleMesh mesh_;
  BinaryMask source_mask_;
};

}  // namespace

PipelineReport cmd_reenact(const RunConfig& config, const RunOptions& options) {
  PipelineReport report;
  report.mode = "reenact";
  StageClock clock(report.timings);
  const int workers = resolve_workers(options.workers);

  const Inputs in = load_inputs(config, clock);
  const Analysis a = analyze(config, in, workers, clock);
  report.target_frames = static_cast<int>(in.target_frames.size());
  report.source_frames = static_cast<int>(in.source_frames.size());
  report.matching = a.matching;
  report.features_cached = a.features_cached;
  report.matching_cached = a.matching_cached;

  FrameSynthesizer synth(config, in, a);
  clock.run("transfer", [&] { synth.prepare_transfer(); });
  clock.run("composite", [&] { synth.prepare_composite(); });

  std::vector<Synthesis> results(in.target_frames.size());
  const auto start = std::chrono::steady_clock::now();
  parallel_for(results.size(), workers, [&](std::size_t i) {
    std::string stage;
    try {
      results[i] = synth.run(static_cast<int>(i), stage);
    } catch (const Error& e) {
      throw StageError(stage, e.kind(), "frame " + std::to_string(i) + ": " + e.what());
    }
  });
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  report.timings.push_back({"transfer_composite", elapsed.count()});

  clock.run("output", [&] {
    std::vector<ImageBuffer> frames;
    std::vector<ImageBuffer> masks;
    frames.reserve(results.size());
    for (auto& r : results) {
      frames.push_back(std::move(r.frame));
      if (options.write_masks) masks.push_back(mask_image(r.mask));
      report.frames.push_back(r.record);
    }
    io::write_frame_sequence(frames, config.output_dir);
    io::write_frame_sequence(masks, config.output_dir / "masks", "mask_");
    write_outputs(config, report);
  });
  return report;
}

PipelineReport cmd_validate_self(const RunConfig& config, const RunOptions& options) {
  PipelineReport report;
  report.mode = "validate_self";
  StageClock clock(report.timings);
  clock.run("pipeline_cli", [&] {
    if (!same_path(config.source_dir, config.target_dir)) {
      throw Error(ErrorKind::Config, "self validation needs source_dir == target_dir");
    }
  });
  const Inputs in = load_inputs(config, clock);
  const Analysis a = analyze(config, in, resolve_workers(options.workers), clock);
  report.target_frames = static_cast<int>(in.target_frames.size());
  report.source_frames = static_cast<int>(in.source_frames.size());
  report.matching = a.matching;
  report.features_cached = a.features_cached;
  report.matching_cached = a.matching_cached;
  report.mismatches = matching::count_mismatches(a.matching.assignments);
  clock.run("output", [&] { write_outputs(config, report); });
  return report;
}

std::vector<fs::path> cmd_dump_diagnostics(const RunConfig& config, const RunOptions&) {
  std::vector<StageTiming> timings;
  StageClock clock(timings);
  const Inputs in = load_inputs(config, clock);
  return clock.run("diagnostics", [&] {
    const CacheKeys keys = cache_keys(config, in);
    const fs::path cached = resolve_cache_dir(config) / (keys.matching + "-matching.json");
    if (!fs::exists(cached)) {
      throw Error(ErrorKind::CacheMissing,
                  "no cached matching for these inputs (expected " + cached.string() + ")");
    }
    const auto result = read_matching_json(cached);
    const fs::path dir = config.output_dir / "diagnostics";
    fs::create_directories(dir);
    std::vector<fs::path> written;

    std::ostringstream clusters;
    clusters << std::setprecision(17)
             << "cluster,start,end,length,center,source_index,appearance,motion,total\n";
    for (const auto& a : result.assignments) {
      clusters << a.cluster << ',' << a.span.start << ',' << a.span.end << ','
               << a.span.length() << ',' << a.anchor_frame() << ',' << a.source_index << ','
               << a.appearance << ',' << a.motion << ',' << a.total << '\n';
    }
    written.push_back(dir / "clusters.csv");
    write_text(written.back(), clusters.str());

    std::ostringstream candidates;
    candidates << std::setprecision(17) << "tau = " << config.tau << '\n'
               << "cluster,source_index,aggregate_appearance,motion_distance\n";
    for (const auto& a : result.assignments) {
      for (std::size_t s = 0; s < a.candidate_appearance.size(); ++s) {
        candidates << a.cluster << ',' << s << ',' << a.candidate_appearance[s] << ',';
        if (!a.candidate_motion.empty()) candidates << a.candidate_motion[s];
        candidates << '\n';
      }
    }
    written.push_back(dir / "candidates.csv");
    write_text(written.back(), candidates.str());

    for (const auto& a : result.assignments) {
      const auto& left = in.target_frames.at(static_cast<std::size_t>(a.anchor_frame()));
      const auto& right = in.source_frames.at(static_cast<std::size_t>(a.source_index));
      ImageBuffer strip(left.width() + right.width(), std::max(left.height(), right.height()),
                        left.channels());
      for (const auto* img : {&left, &right}) {
        const int x0 = img == &left ? 0 : left.width();
        for (int y = 0; y < img->height(); ++y) {
          for (int x = 0; x < img->width(); ++x) {
            for (int c = 0; c < img->channels(); ++c) strip.at(x0 + x, y, c) = img->at(x, y, c);
          }
        }
      }
      written.push_back(io::indexed_path(dir, "strip_", a.cluster, ".png"));
      io::write_image(written.back(), strip);
    }
    return written;
  });
}

}  // namespace reenact::pipeline
