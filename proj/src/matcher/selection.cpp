#include <algorithm>

#include "reenact/error.hpp"
#include "reenact/matcher.hpp"

namespace reenact::matching {

std::vector<double> min_max_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

MatchAssignment select_source_frame(int cluster_index, const ClusterSpan& span,
                                    std::optional<int> previous_selection,
                                    const DistanceMatrix& cross,
                                    const std::optional<MotionField66>& cluster_motion,
                                    std::span<const LandmarkShape> source_shapes, double tau) {
  const auto sources = static_cast<int>(cross.cols());
  if (sources == 0) throw Error(ErrorKind::EmptySequence, "source sequence is empty");
  if (span.start < 0 || span.end >= cross.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "cluster span outside the target sequence");
  }
  const bool use_motion = previous_selection.has_value() && cluster_motion.has_value();
  if (use_motion && static_cast<int>(source_shapes.size()) != sources) {
    throw Error(ErrorKind::DimensionMismatch, "source shapes do not match the distance matrix");
  }

  MatchAssignment result;
  result.cluster = cluster_index;
  result.span = span;
  result.candidate_appearance.assign(static_cast<std::size_t>(sources), 0.0);
  for (int s = 0; s < sources; ++s) {
    double sum = 0.0;
    for (int t = span.start; t <= span.end; ++t) sum += cross(t, s);
    result.candidate_appearance[static_cast<std::size_t>(s)] = sum;
  }
  const auto appearance = min_max_normalize(result.candidate_appearance);

  std::vector<double> motion(static_cast<std::size_t>(sources), 0.0);
  if (use_motion) {
    const auto& prev = source_shapes[static_cast<std::size_t>(*previous_selection)];
    result.candidate_motion.resize(static_cast<std::size_t>(sources));
    for (int s = 0; s < sources; ++s) {
      const auto source_motion = shape_difference(prev, source_shapes[static_cast<std::size_t>(s)]);
      result.candidate_motion[static_cast<std::size_t>(s)] =
          motion_distance(*cluster_motion, source_motion);
    }
    motion = min_max_normalize(result.candidate_motion);
  }

  int best = 0;
  double best_total = appearance[0] + (use_motion ? tau * motion[0] : 0.0);
  for (int s = 1; s < sources; ++s) {
    const double total = appearance[static_cast<std::size_t>(s)] +
                         (use_motion ? tau * motion[static_cast<std::size_t>(s)] : 0.0);
    if (total < best_total) {
      best = s;
      best_total = total;
    }
  }
  result.source_index = best;
  result.appearance = appearance[static_cast<std::size_t>(best)];
  result.motion = motion[static_cast<std::size_t>(best)];
  result.total = best_total;
  return result;
}

MatchAssignment select_source_frame(int cluster_index, const ClusterSpan& span,
                                    std::optional<int> previous_selection,
                                    std::span<const lbp::FrameFeatures> target_features,
                                    std::span<const lbp::FrameFeatures> source_features,
                                    const RegionWeights& weights,
                                    const std::optional<MotionField66>& cluster_motion,
                                    std::span<const LandmarkShape> source_shapes, double tau) {
  const auto cross = pairwise_distances(target_features, source_features, weights);
  return select_source_frame(cluster_index, span, previous_selection, cross, cluster_motion,
                             source_shapes, tau);
}

MatchingResult run_matching(const DistanceMatrix& target_self, const DistanceMatrix& cross,
                            std::span<const LandmarkShape> target_shapes,
                            std::span<const LandmarkShape> source_shapes,
                            const MatchingOptions& options) {
  if (cross.rows() == 0 || cross.cols() == 0) {
    throw Error(ErrorKind::EmptySequence, "matching needs nonempty source and target sequences");
  }
  if (target_self.rows() != cross.rows() || static_cast<Eigen::Index>(target_shapes.size()) != cross.rows() ||
      static_cast<Eigen::Index>(source_shapes.size()) != cross.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matching inputs disagree on sequence lengths");
  }
  MatchingResult result;
  result.clustering = options.temporal_clustering
                          ? temporal_clustering(target_self)
                          : singleton_clusters(static_cast<int>(cross.rows()));
  const auto motions = cluster_motions(result.clustering.spans, target_shapes);
  std::optional<int> previous;
  for (std::size_t k = 0; k < result.clustering.spans.size(); ++k) {
    auto assignment = select_source_frame(static_cast<int>(k), result.clustering.spans[k], previous,
                                          cross, motions[k], source_shapes, options.tau);
    previous = assignment.source_index;
    result.assignments.push_back(std::move(assignment));
  }
  return result;
}

int count_mismatches(std::span<const MatchAssignment> assignments) {
  return static_cast<int>(std::count_if(assignments.begin(), assignments.end(), [](const auto& a) {
    return !a.span.contains(a.source_index);
  }));
}

}  // namespace reenact::matching
