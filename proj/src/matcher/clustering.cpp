#include <algorithm>
#include <limits>

#include "reenact/error.hpp"
#include "reenact/matcher.hpp"
#include "reenact/parallel.hpp"

namespace reenact::matching {

DistanceMatrix pairwise_distances(std::span<const lbp::FrameFeatures> rows,
                                  std::span<const lbp::FrameFeatures> cols,
                                  const RegionWeights& weights, int workers) {
  DistanceMatrix d(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          lbp::appearance_distance(rows[i], cols[j], weights);
    }
  });
  return d;
}

double within_cluster_variance(const DistanceMatrix& d, const ClusterSpan& span) {
  const long pairs = static_cast<long>(span.length()) * (span.length() - 1) / 2;
  if (pairs < 2) return 0.0;
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = span.start; i <= span.end; ++i) {
    for (int j = i + 1; j <= span.end; ++j) {
      const double v = d(i, j);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo == hi) return 0.0;
  const double mean = sum / static_cast<double>(pairs);
  double sq = 0.0;
  for (int i = span.start; i <= span.end; ++i) {
    for (int j = i + 1; j <= span.end; ++j) {
      const double dev = d(i, j) - mean;
      sq += dev * dev;
    }
  }
  return sq / static_cast<double>(pairs);
}

double average_linkage(const DistanceMatrix& d, const ClusterSpan& a, const ClusterSpan& b) {
  double sum = 0.0;
  for (int i = a.start; i <= a.end; ++i) {
    for (int j = b.start; j <= b.end; ++j) sum += d(i, j);
  }
  return sum / (static_cast<double>(a.length()) * b.length());
}

ClusteringResult singleton_clusters(int frame_count) {
  ClusteringResult result;
  for (int t = 0; t < frame_count; ++t) result.spans.push_back({t, t});
  return result;
}

ClusteringResult temporal_clustering(const DistanceMatrix& d) {
  if (d.rows() != d.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "clustering needs a square self-distance matrix");
  }
  ClusteringResult result = singleton_clusters(static_cast<int>(d.rows()));
  auto& spans = result.spans;
  std::vector<double> variance(spans.size(), 0.0);
  std::vector<double> linkage;
  for (std::size_t k = 0; k + 1 < spans.size(); ++k) {
    linkage.push_back(average_linkage(d, spans[k], spans[k + 1]));
  }

  while (spans.size() > 1) {
    // First minimum wins, so ties resolve to the earliest pair.
    const auto k = static_cast<std::size_t>(
        std::distance(linkage.begin(), std::min_element(linkage.begin(), linkage.end())));
    const ClusterSpan merged{spans[k].start, spans[k + 1].end};

    MergeEvent event;
    event.left = spans[k];
    event.right = spans[k + 1];
    event.linkage = linkage[k];
    event.left_variance = variance[k];
    event.right_variance = variance[k + 1];
    event.merged_variance = within_cluster_variance(d, merged);
    const bool both_singletons = spans[k].length() == 1 && spans[k + 1].length() == 1;
    event.accepted = both_singletons || event.merged_variance == 0.0 ||
                     event.merged_variance < std::max(event.left_variance, event.right_variance);
    result.merge_log.push_back(event);
    if (!event.accepted) break;

    spans[k] = merged;
    variance[k] = event.merged_variance;
    spans.erase(spans.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    variance.erase(variance.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    linkage.erase(linkage.begin() + static_cast<std::ptrdiff_t>(k));
    if (k > 0) linkage[k - 1] = average_linkage(d, spans[k - 1], spans[k]);
    if (k < linkage.size()) linkage[k] = average_linkage(d, spans[k], spans[k + 1]);
  }
  return result;
}

}  // namespace reenact::matching
