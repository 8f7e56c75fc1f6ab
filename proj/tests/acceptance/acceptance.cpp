// Acceptance checks, one line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "reenact/composite.hpp"
#include "reenact/feature_lbp.hpp"
#include "reenact/matcher.hpp"
#include "reenact/media_io.hpp"
#include "reenact/pipeline.hpp"
#include "reenact/synth.hpp"
#include "reenact/transfer.hpp"
#include "support/oracles.hpp"

using namespace reenact;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> check;
};

const matching::RegionWeights kWeights{0.6, 0.15, 0.15, 0.1};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

// 1 ---------------------------------------------------------------------------

Outcome lbp_structure() {
  const auto& table = lbp::uniform_label_table();
  std::set<int> labels(table.begin(), table.end());
  const auto catch_all = std::count(table.begin(), table.end(), lbp::kNonUniformLabel);

  std::mt19937_64 rng(1);
  const auto img = oracle::random_gray(30, 30, rng);
  const auto d = lbp::region_descriptor(img, {{0, 0, 29, 29}, 3, 2});
  const std::size_t per_tile = d.bins.size() / static_cast<std::size_t>(d.tiles);

  const bool pass = labels.size() == 59 && *labels.rbegin() == 58 && catch_all == 198 &&
                    per_tile == 75 && lbp::kTileBins == 75;
  return {pass, "labels=" + std::to_string(labels.size()) + " catch_all=" + std::to_string(catch_all) +
                    " tile_bins=" + std::to_string(per_tile)};
}

// 2 ---------------------------------------------------------------------------

Outcome metric_oracle() {
  std::mt19937_64 rng(2);
  double worst = 0.0, max_d = 0.0, min_d = 1.0, self = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::random_features(rng);
    const auto b = oracle::random_features(rng);
    const double d = lbp::appearance_distance(a, b, kWeights);
    worst = std::max(worst, std::abs(d - oracle::appearance(a, b, kWeights)));
    max_d = std::max(max_d, d);
    min_d = std::min(min_d, d);
    self = std::max(self, std::abs(lbp::appearance_distance(a, a, kWeights)));
  }
  const bool pass = worst <= 1e-12 && self == 0.0 && max_d <= 1.0 && min_d >= 0.0;
  return {pass, "max|d-oracle|=" + fmt(worst) + " max d(a,a)=" + fmt(self) + " range=[" + fmt(min_d) +
                    "," + fmt(max_d) + "]"};
}

// 3 ---------------------------------------------------------------------------

Outcome motion_metric() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  double self = 0.0;
  for (int i = 0; i < 100; ++i) {
    matching::MotionField66 v;
    for (auto& p : v) p = {n(rng), n(rng)};
    self = std::max(self, matching::motion_distance(v, v));
  }
  matching::MotionField66 unit, opposite;
  for (int i = 0; i < kLandmarkCount; ++i) {
    const double a = 2.0 * M_PI * i / kLandmarkCount;
    unit[i] = {std::cos(a), std::sin(a)};
    opposite[i] = -unit[i];
  }
  const double expected = 1.0 - (2.0 * std::exp(-2.0) + 1.0) / 3.0;
  const double err = std::abs(matching::motion_distance(unit, opposite) - expected);
  return {self == 0.0 && err <= 1e-12, "max d(v,v)=" + fmt(self) + " antipodal err=" + fmt(err)};
}

// 4 ---------------------------------------------------------------------------

lbp::FrameFeatures mix(const lbp::FrameFeatures& a, const lbp::FrameFeatures& b, double t) {
  auto out = a;
  for (std::size_t r = 0; r < out.regions.size(); ++r) {
    for (std::size_t k = 0; k < out.regions[r].bins.size(); ++k) {
      out.regions[r].bins[k] = (1 - t) * a.regions[r].bins[k] + t * b.regions[r].bins[k];
    }
  }
  return out;
}

Outcome clustering_invariants() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> frames_dist(1, 40);
  std::uniform_int_distribution<int> block_len(1, 10);
  std::uniform_real_distribution<double> amount(0.0, 0.4);
  int partition_failures = 0;
  int non_consecutive = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int frames = frames_dist(rng);
    std::vector<lbp::FrameFeatures> seq;
    while (static_cast<int>(seq.size()) < frames) {
      const auto base = oracle::random_features(rng);
      const int len = block_len(rng);
      for (int i = 0; i < len && static_cast<int>(seq.size()) < frames; ++i) {
        seq.push_back(mix(base, oracle::random_features(rng), amount(rng)));
      }
    }
    const auto d = matching::pairwise_distances(seq, seq, kWeights);
    const auto result = matching::temporal_clustering(d);
    int next = 0;
    bool ok = !result.spans.empty();
    for (const auto& s : result.spans) {
      ok = ok && s.start == next && s.end >= s.start;
      next = s.end + 1;
    }
    ok = ok && next == frames;
    partition_failures += ok ? 0 : 1;
    for (const auto& m : result.merge_log) non_consecutive += m.left.end + 1 == m.right.start ? 0 : 1;
  }

  std::vector<lbp::FrameFeatures> blocks;
  std::vector<lbp::FrameFeatures> bases{oracle::random_features(rng), oracle::random_features(rng),
                                        oracle::random_features(rng)};
  for (int b = 0; b < 3; ++b) {
    for (int i = 0; i < 5 + 2 * b; ++i) blocks.push_back(bases[static_cast<std::size_t>(b)]);
  }
  const auto d = matching::pairwise_distances(blocks, blocks, kWeights);
  const auto three = matching::temporal_clustering(d);
  const double inter = std::min({d(0, 5), d(5, 12), d(0, 12)});
  for (const auto& m : three.merge_log) non_consecutive += m.left.end + 1 == m.right.start ? 0 : 1;
  const bool spans_ok = three.spans.size() == 3 && three.spans[0] == matching::ClusterSpan{0, 4} &&
                        three.spans[1] == matching::ClusterSpan{5, 11} &&
                        three.spans[2] == matching::ClusterSpan{12, 20};

  const bool pass = partition_failures == 0 && non_consecutive == 0 && spans_ok;
  return {pass, "partition_failures=" + std::to_string(partition_failures) +
                    " non_consecutive_merges=" + std::to_string(non_consecutive) +
                    " block_clusters=" + std::to_string(three.spans.size()) +
                    " min_inter_block_d=" + fmt(inter)};
}

// 5 ---------------------------------------------------------------------------

Outcome warping_energy() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.5);
  double worst_coord = 0.0, worst_grad = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const synth::Pose pose{150 + 20 * u(rng), 110 + 20 * u(rng), 45 + 20 * u(rng), 0.2 * (u(rng) - 0.5)};
    std::vector<LandmarkShape> target;
    for (int t = 0; t < 5; ++t) {
      auto s = synth::face_shape({u(rng), 2 * u(rng) - 1, 2 * u(rng) - 1, 0.3 + u(rng)}, pose, t);
      for (auto& p : s.points) p += Point2(n(rng), n(rng));
      target.push_back(s);
    }
    const synth::Pose src_pose{100 + 50 * u(rng), 90 + 30 * u(rng), 30 + 30 * u(rng), 0.4 * (u(rng) - 0.5)};
    const auto src_a = synth::face_shape({u(rng), 2 * u(rng) - 1, 0, 1}, src_pose);
    const auto src_b = synth::face_shape({u(rng), 2 * u(rng) - 1, 0, 1}, src_pose);
    const double b2 = u(rng);
    const transfer::BlendWeights betas{1 - b2, b2};
    const double a0 = 0.3 * u(rng), a2 = 0.3 * u(rng);
    const double w_nr = u(rng);
    const transfer::ShapeWeights weights{{a0, 1 - a0 - a2, a2}, w_nr, 1 - w_nr};
    const int t = trial % 5;

    const auto closed = transfer::reenact_shape(t, target, src_a, src_b, betas, weights);
    const auto a = transfer::smoothed_target(t, target, weights.alpha);
    const auto b = transfer::aligned_source_blend(t, target, src_a, src_b, betas);
    Eigen::VectorXd va(132), vb(132), start(132), x(132);
    for (int i = 0; i < kLandmarkCount; ++i) {
      va.segment<2>(2 * i) = a[i];
      vb.segment<2>(2 * i) = b[i];
      start.segment<2>(2 * i) = target[static_cast<std::size_t>(t)].points[i];
      x.segment<2>(2 * i) = closed.points[i];
    }
    const auto numeric = oracle::minimize_warping_energy(va, vb, weights.w_nr, weights.w_r, start, 1e-10);
    worst_coord = std::max(worst_coord, (numeric - x).lpNorm<Eigen::Infinity>());

    const double h = 1e-3;
    for (int i = 0; i < kLandmarkCount; ++i) {
      Eigen::Vector2d g;
      for (int c = 0; c < 2; ++c) {
        Eigen::VectorXd xp = x, xm = x;
        xp[2 * i + c] += h;
        xm[2 * i + c] -= h;
        g[c] = (oracle::warping_energy(xp, va, vb, weights.w_nr, weights.w_r) -
                oracle::warping_energy(xm, va, vb, weights.w_nr, weights.w_r)) / (2 * h);
      }
      worst_grad = std::max(worst_grad, g.norm());
    }
  }
  return {worst_coord <= 1e-6 && worst_grad <= 1e-8,
          "max|closed-numeric|=" + fmt(worst_coord) + " max|grad|=" + fmt(worst_grad)};
}

// 6 ---------------------------------------------------------------------------

FloatImage random_float(int w, int h, int channels, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  FloatImage img(w, h, channels);
  for (auto& v : img.data()) v = u(rng);
  return img;
}

Outcome poisson_correctness() {
  std::mt19937_64 rng(6);
  std::bernoulli_distribution coin(0.75);
  double dense_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto src = random_float(9, 9, 3, rng, 0.0, 255.0);
    const auto dst = random_float(9, 9, 3, rng, 0.0, 255.0);
    BinaryMask mask(9, 9);
    for (int y = 2; y < 7; ++y) {
      for (int x = 2; x < 7; ++x) mask.set(x, y, coin(rng));
    }
    mask.set(4, 4, true);
    const auto got = composite::poisson_clone(src, dst, mask).image;
    const auto expected = oracle::dense_poisson(src, dst, mask);
    for (std::size_t i = 0; i < got.data().size(); ++i) {
      dense_err = std::max(dense_err, std::abs(got.data()[i] - expected.data()[i]));
    }
  }

  int principle_violations = 0;
  std::uniform_int_distribution<int> size(12, 40);
  for (int trial = 0; trial < 20; ++trial) {
    const int w = size(rng), h = size(rng);
    const FloatImage flat(w, h, 1, 17.0);
    const auto boundary = random_float(w, h, 1, rng, -50.0, 50.0);
    BinaryMask mask(w, h);
    std::bernoulli_distribution fill(0.85);
    for (int y = 1; y < h - 1; ++y) {
      for (int x = 1; x < w - 1; ++x) mask.set(x, y, fill(rng));
    }
    const auto out = composite::poisson_clone(flat, boundary, mask).image;
    double lo = 1e300, hi = -1e300;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (mask.get(x, y)) continue;
        lo = std::min(lo, boundary.at(x, y));
        hi = std::max(hi, boundary.at(x, y));
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (mask.get(x, y) && (out.at(x, y) < lo - 1e-9 || out.at(x, y) > hi + 1e-9)) ++principle_violations;
      }
    }
  }

  const auto same = random_float(64, 48, 3, rng, 0.0, 255.0);
  BinaryMask blob(64, 48);
  for (int y = 4; y < 44; ++y) {
    for (int x = 4; x < 60; ++x) blob.set(x, y, (x - 32) * (x - 32) / 784.0 + (y - 24) * (y - 24) / 400.0 <= 1.0);
  }
  const auto identity = composite::poisson_clone(same, same, blob).image;
  double identity_err = 0.0;
  for (std::size_t i = 0; i < same.data().size(); ++i) {
    identity_err = std::max(identity_err, std::abs(identity.data()[i] - same.data()[i]));
  }

  const bool pass = dense_err <= 1e-9 && principle_violations == 0 && identity_err <= 1e-6;
  return {pass, "max|cg-dense|=" + fmt(dense_err) + " max_principle_violations=" +
                    std::to_string(principle_violations) + " identity_err=" + fmt(identity_err)};
}

// 7 ---------------------------------------------------------------------------

RunConfig config_for(const fs::path& source, const fs::path& target, const fs::path& out) {
  RunConfig c;
  c.source_dir = source;
  c.target_dir = target;
  c.output_dir = out;
  c.source_landmarks = source / "landmarks.txt";
  c.target_landmarks = target / "landmarks.txt";
  return c;
}

synth::Sequence palette_sequence(int blocks, int length, const synth::Pose& pose, const synth::Jitter& jitter,
                                 int w, int h, std::uint64_t seed, int rotate = 0) {
  const auto palette = synth::expression_palette();
  std::vector<synth::Block> plan;
  for (int b = 0; b < blocks; ++b) {
    plan.push_back({length, palette[static_cast<std::size_t>(b + rotate) % palette.size()]});
  }
  return synth::block_sequence(plan, pose, jitter, w, h, seed);
}

Outcome self_reenactment() {
  const auto root = oracle::scratch_dir("acceptance_self");
  const synth::Jitter jitter{0.0, 0.5, 0.01, 0.01, 1.0};
  const auto seq = palette_sequence(10, 6, {160, 100.8, 52.8, 0}, jitter, 320, 240, 7);
  synth::write_sequence(seq, root / "sequence");
  const auto config = config_for(root / "sequence", root / "sequence", root / "out");
  ::unsetenv(pipeline::kCacheDirEnv);

  const auto validation = pipeline::cmd_validate_self(config, {1, false});
  const double rate = validation.mismatch_rate();

  pipeline::cmd_reenact(config, {1, true});
  const auto frames = io::load_frame_sequence(root / "out");
  double error = 0.0;
  std::size_t samples = 0;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto mask = io::read_image(io::indexed_path(root / "out" / "masks", "mask_", static_cast<int>(t), ".png"));
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        if (mask.at(x, y) == 0) continue;
        for (int c = 0; c < 3; ++c) error += std::abs(frames[t].at(x, y, c) - seq.frames[t].at(x, y, c));
        samples += 3;
      }
    }
  }
  const double mae = samples > 0 ? error / static_cast<double>(samples) : 1e9;
  const bool pass = frames.size() == 60 && rate <= 0.05 && mae <= 2.0;
  return {pass, "clusters=" + std::to_string(validation.cluster_count()) + " mismatches=" +
                    std::to_string(validation.mismatches.value_or(-1)) + " rate=" + fmt(rate) +
                    " mae_in_mask=" + fmt(mae)};
}

// 8 ---------------------------------------------------------------------------

int planted_hits(const pipeline::PipelineReport& report, const synth::PlantedFixture& fixture) {
  int hits = 0;
  for (const auto& a : report.matching.assignments) {
    for (int t = a.span.start; t <= a.span.end; ++t) {
      const int block = fixture.target.block_of_frame[static_cast<std::size_t>(t)];
      hits += a.source_index == fixture.planted[static_cast<std::size_t>(block)] ? 1 : 0;
    }
  }
  return hits;
}

Outcome ablation_ordering() {
  const auto root = oracle::scratch_dir("acceptance_planted");
  const auto fixture = synth::planted_fixture(320, 240, {0.0, 0.5, 0.01, 0.01, 1.0}, 8);
  synth::write_sequence(fixture.target, root / "target");
  synth::write_sequence(fixture.source, root / "source");

  auto full = config_for(root / "source", root / "target", root / "full");
  full.tau = 0.8;
  full.temporal_clustering = true;
  auto baseline = config_for(root / "source", root / "target", root / "baseline");
  baseline.tau = 0.0;
  baseline.temporal_clustering = false;
  const int full_hits = planted_hits(pipeline::cmd_reenact(full, {1, false}), fixture);
  const int base_hits = planted_hits(pipeline::cmd_reenact(baseline, {1, false}), fixture);

  // Two target expressions; in the second cluster sources 1 and 2 tie on
  // appearance, and only source 2 moves the way the target does.
  const auto neutral = synth::face_shape({}, {});
  const auto open = synth::face_shape({0.9, 0, 0, 1}, {});
  const auto smile = synth::face_shape({0, 0.9, 0, 1}, {});
  const std::vector<LandmarkShape> target{neutral, neutral, neutral, open, open, open};
  const std::vector<LandmarkShape> source{neutral, smile, open};
  matching::DistanceMatrix self(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) self(i, j) = (i < 3) == (j < 3) ? 0.0 : 0.8;
  }
  matching::DistanceMatrix cross(6, 3);
  for (int t = 0; t < 6; ++t) {
    cross(t, 0) = t < 3 ? 0.05 : 0.7;
    cross(t, 1) = t < 3 ? 0.7 : 0.2;
    cross(t, 2) = t < 3 ? 0.7 : 0.2;
  }
  const auto with_motion = matching::run_matching(self, cross, target, source, {0.8, true});
  const auto without = matching::run_matching(self, cross, target, source, {0.0, true});
  const bool motion_changes =
      with_motion.assignments.size() == 2 && without.assignments.size() == 2 &&
      with_motion.assignments[1].source_index != without.assignments[1].source_index;

  const int frames = static_cast<int>(fixture.target.frames.size());
  const bool pass = full_hits >= base_hits && motion_changes;
  return {pass, "planted_hits full=" + std::to_string(full_hits) + "/" + std::to_string(frames) +
                    " per_frame=" + std::to_string(base_hits) + "/" + std::to_string(frames) +
                    " tie_selection tau0=" + std::to_string(without.assignments.back().source_index) +
                    " tau0.8=" + std::to_string(with_motion.assignments.back().source_index)};
}

// 9 ---------------------------------------------------------------------------

Outcome throughput() {
  const auto root = oracle::scratch_dir("acceptance_throughput");
  const synth::Jitter jitter{0.0, 0.5, 0.01, 0.01, 1.0};
  const auto target = palette_sequence(10, 10, {320, 201.6, 105.6, 0}, jitter, 640, 480, 91);
  const auto source = palette_sequence(10, 10, {310, 210, 100, 0.03}, jitter, 640, 480, 92, 3);
  synth::write_sequence(target, root / "target");
  synth::write_sequence(source, root / "source");
  const auto config = config_for(root / "source", root / "target", root / "out");

  const auto start = std::chrono::steady_clock::now();
  const auto report = pipeline::cmd_reenact(config, {1, false});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = report.frames.size() == 100 && seconds <= 300.0;
  return {pass, "frames=" + std::to_string(report.frames.size()) + " seconds=" + fmt(seconds) +
                    " clusters=" + std::to_string(report.cluster_count())};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "LBP structure exactness", 1.0, lbp_structure},
      {2, "metric oracle equivalence", 5.0, metric_oracle},
      {3, "motion metric", 1.0, motion_metric},
      {4, "clustering invariants", 30.0, clustering_invariants},
      {5, "warping energy closed form", 10.0, warping_energy},
      {6, "Poisson correctness", 30.0, poisson_correctness},
      {7, "self-reenactment protocol", 120.0, self_reenactment},
      {8, "ablation ordering", 60.0, ablation_ordering},
      {9, "throughput sanity", 300.0, throughput},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    failures += pass ? 0 : 1;
    std::cout << "criterion " << c.id << " [" << (pass ? "PASS" : "FAIL") << "] " << c.name << ": "
              << outcome.detail << " (" << fmt(seconds) << " s of " << c.budget_seconds << " s)"
              << (in_time ? "" : " over time budget") << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures;
}
