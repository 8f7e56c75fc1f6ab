#include <algorithm>

#include "reenact/error.hpp"
#include "reenact/transfer.hpp"

namespace reenact::transfer {

BlendWeights compute_betas(int t, int prev_center, int next_center) {
  if (prev_center == next_center) return {0.0, 1.0};
  const int clamped = std::clamp(t, std::min(prev_center, next_center),
                                 std::max(prev_center, next_center));
  const double beta2 = static_cast<double>(clamped - prev_center) / (next_center - prev_center);
  return {1.0 - beta2, beta2};
}

Bracket bracket_frame(int t, std::span<const matching::MatchAssignment> assignments) {
  if (assignments.empty()) throw Error(ErrorKind::EmptySequence, "no selections to interpolate");
  Bracket b;
  const std::size_t last = assignments.size() - 1;
  if (t <= assignments.front().anchor_frame()) {
    b.before = b.after = 0;
  } else if (t >= assignments.back().anchor_frame()) {
    b.before = b.after = last;
  } else {
    std::size_t k = 0;
    while (k + 1 < assignments.size() && assignments[k + 1].anchor_frame() <= t) ++k;
    b.before = k;
    b.after = assignments[k].anchor_frame() == t ? k : k + 1;
  }
  b.prev_center = assignments[b.before].anchor_frame();
  b.next_center = assignments[b.after].anchor_frame();
  b.betas = b.before == b.after ? BlendWeights{1.0, 0.0}
                                : compute_betas(t, b.prev_center, b.next_center);
  return b;
}

LandmarkPoints smoothed_target(int t, std::span<const LandmarkShape> target_shapes,
                               const std::array<double, 3>& alpha) {
  const int last = static_cast<int>(target_shapes.size()) - 1;
  if (t < 0 || t > last) throw Error(ErrorKind::DimensionMismatch, "frame outside target track");
  const auto& prev = target_shapes[static_cast<std::size_t>(t > 0 ? t - 1 : t)].points;
  const auto& cur = target_shapes[static_cast<std::size_t>(t)].points;
  const auto& next = target_shapes[static_cast<std::size_t>(t < last ? t + 1 : t)].points;
  LandmarkPoints out;
  for (int i = 0; i < kLandmarkCount; ++i) {
    out[i] = alpha[0] * prev[i] + alpha[1] * cur[i] + alpha[2] * next[i];
  }
  return out;
}

LandmarkPoints aligned_source_blend(int t, std::span<const LandmarkShape> target_shapes,
                                    const LandmarkShape& source_before,
                                    const LandmarkShape& source_after, const BlendWeights& betas) {
  const auto& target = target_shapes[static_cast<std::size_t>(t)].points;
  const auto to_before = landmarks::fit_affine(source_before.points, target);
  const auto to_after = landmarks::fit_affine(source_after.points, target);
  LandmarkPoints out;
  for (int i = 0; i < kLandmarkCount; ++i) {
    out[i] = betas.beta1 * to_before.apply(source_before.points[i]) +
             betas.beta2 * to_after.apply(source_after.points[i]);
  }
  return out;
}

LandmarkShape reenact_shape(int t, std::span<const LandmarkShape> target_shapes,
                            const LandmarkShape& source_before, const LandmarkShape& source_after,
                            const BlendWeights& betas, const ShapeWeights& weights) {
  const auto a = smoothed_target(t, target_shapes, weights.alpha);
  const auto b = aligned_source_blend(t, target_shapes, source_before, source_after, betas);
  LandmarkShape out;
  out.frame_index = t;
  for (int i = 0; i < kLandmarkCount; ++i) out.points[i] = weights.w_nr * a[i] + weights.w_r * b[i];
  return out;
}

double warping_energy(const LandmarkPoints& candidate, const LandmarkPoints& nonrigid_target,
                      const LandmarkPoints& affine_target, double w_nr, double w_r) {
  double e_nr = 0.0;
  double e_r = 0.0;
  for (int i = 0; i < kLandmarkCount; ++i) {
    e_nr += (candidate[i] - nonrigid_target[i]).squaredNorm();
    e_r += (candidate[i] - affine_target[i]).squaredNorm();
  }
  return w_nr * e_nr + w_r * e_r;
}

}  // namespace reenact::transfer
