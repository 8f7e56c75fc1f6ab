#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "reenact/feature_lbp.hpp"
#include "reenact/shape.hpp"

namespace reenact::matching {

using RegionWeights = std::array<double, landmarks::kRegionCount>;

/// Row i, column j holds d_app(rows[i], cols[j]).
using DistanceMatrix = Eigen::MatrixXd;

DistanceMatrix pairwise_distances(std::span<const lbp::FrameFeatures> rows,
                                  std::span<const lbp::FrameFeatures> cols,
                                  const RegionWeights& weights, int workers = 1);

/// Inclusive interval of target frames.
struct ClusterSpan {
  int start = 0;
  int end = 0;

  int length() const noexcept { return end - start + 1; }
  int center() const noexcept { return (start + end) / 2; }
  bool contains(int t) const noexcept { return t >= start && t <= end; }
  friend bool operator==(const ClusterSpan&, const ClusterSpan&) = default;
};

struct MergeEvent {
  ClusterSpan left;
  ClusterSpan right;
  double linkage = 0.0;
  double left_variance = 0.0;
  double right_variance = 0.0;
  double merged_variance = 0.0;
  bool accepted = false;
};

struct ClusteringResult {
  std::vector<ClusterSpan> spans;
  /// Every evaluated merge in order; only the last entry can be rejected.
  std::vector<MergeEvent> merge_log;
};

/// Population variance of d_app over all unordered member pairs; 0 for fewer than 2 pairs.
double within_cluster_variance(const DistanceMatrix& self_distances, const ClusterSpan& span);

/// Mean of d_app over all (i in a, j in b).
double average_linkage(const DistanceMatrix& self_distances, const ClusterSpan& a,
                       const ClusterSpan& b);

/// Temporal agglomerative clustering on the T x T target self-distance matrix.
///
/// The closest consecutive pair (average linkage, lowest index on ties) is merged
/// if both are singletons, or if the merged variance is strictly smaller than the
/// larger of the two variances, or is exactly zero. The first rejected candidate
/// terminates the process.
ClusteringResult temporal_clustering(const DistanceMatrix& self_distances);

/// One singleton span per frame (the per-frame matching baseline).
ClusteringResult singleton_clusters(int frame_count);

using MotionField66 = std::array<Point2, kLandmarkCount>;

/// Mean landmark positions over `current` minus those over `previous`.
MotionField66 cluster_motion(const ClusterSpan& previous, const ClusterSpan& current,
                             std::span<const LandmarkShape> shapes);

/// Per cluster, the motion from its predecessor; empty for the first cluster.
std::vector<std::optional<MotionField66>> cluster_motions(std::span<const ClusterSpan> spans,
                                                          std::span<const LandmarkShape> shapes);

/// Per-landmark difference b - a.
MotionField66 shape_difference(const LandmarkShape& from, const LandmarkShape& to);

struct MotionTerms {
  double euclidean = 0.0;
  double angular = 0.0;
  double magnitude = 0.0;
};

inline constexpr double kMotionNormFloor = 1e-8;

MotionTerms motion_terms(const MotionField66& a, const MotionField66& b);

/// 1 - (exp(-d1) + exp(-d2) + exp(-d3)) / 3, in [0, 1).
double motion_distance(const MotionField66& a, const MotionField66& b);

/// Maps aligned shapes to coordinates centred on the reference centroid and
/// scaled by the reference's RMS radius.
std::vector<LandmarkShape> normalize_shapes(std::span<const LandmarkShape> aligned,
                                            const LandmarkShape& reference);

struct MatchAssignment {
  int cluster = 0;
  ClusterSpan span;
  int source_index = 0;
  /// Normalized aggregate appearance term A' of the selection.
  double appearance = 0.0;
  /// Normalized motion term M' of the selection (0 for the first cluster).
  double motion = 0.0;
  double total = 0.0;
  /// Raw per-candidate aggregates A(f_S) and motion distances M(f_S).
  std::vector<double> candidate_appearance;
  std::vector<double> candidate_motion;

  int anchor_frame() const noexcept { return span.center(); }
};

/// Min-max normalization to [0, 1]; a constant input maps to all zeros.
std::vector<double> min_max_normalize(std::span<const double> values);

/// Chooses the source frame minimizing A' + tau * M' for one cluster.
///
/// `cross` is the T x S target-to-source d_app matrix. The motion term is used
/// only when both `previous_selection` and `cluster_motion` are present.
MatchAssignment select_source_frame(int cluster_index, const ClusterSpan& span,
                                    std::optional<int> previous_selection,
                                    const DistanceMatrix& cross,
                                    const std::optional<MotionField66>& cluster_motion,
                                    std::span<const LandmarkShape> source_shapes, double tau);

/// Convenience overload computing the needed distances from features.
MatchAssignment select_source_frame(int cluster_index, const ClusterSpan& span,
                                    std::optional<int> previous_selection,
                                    std::span<const lbp::FrameFeatures> target_features,
                                    std::span<const lbp::FrameFeatures> source_features,
                                    const RegionWeights& weights,
                                    const std::optional<MotionField66>& cluster_motion,
                                    std::span<const LandmarkShape> source_shapes, double tau);

struct MatchingOptions {
  double tau = 0.8;
  bool temporal_clustering = true;
};

struct MatchingResult {
  ClusteringResult clustering;
  std::vector<MatchAssignment> assignments;
};

/// Clusters the target and selects one source frame per cluster in temporal
/// order. Shapes are in normalized aligned coordinates.
MatchingResult run_matching(const DistanceMatrix& target_self, const DistanceMatrix& cross,
                            std::span<const LandmarkShape> target_shapes,
                            std::span<const LandmarkShape> source_shapes,
                            const MatchingOptions& options);

/// Number of assignments whose source frame lies outside its own cluster span.
int count_mismatches(std::span<const MatchAssignment> assignments);

}  // namespace reenact::matching
