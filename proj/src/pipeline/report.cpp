#include <iomanip>
#include <sstream>

#include "reenact/pipeline.hpp"

namespace reenact::pipeline {

StageError::StageError(std::string stage, ErrorKind kind, const std::string& message)
    : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)), kind_(kind) {}

std::vector<int> PipelineReport::cluster_lengths() const {
  std::vector<int> out;
  for (const auto& s : matching.clustering.spans) out.push_back(s.length());
  return out;
}

double PipelineReport::mismatch_rate() const {
  if (!mismatches || cluster_count() == 0) return 0.0;
  return static_cast<double>(*mismatches) / cluster_count();
}

std::string format_report(const PipelineReport& report) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "[run]\n"
      << "mode = " << report.mode << '\n'
      << "target_frames = " << report.target_frames << '\n'
      << "source_frames = " << report.source_frames << '\n';

  const auto& log = report.matching.clustering.merge_log;
  int accepted = 0;
  for (const auto& m : log) accepted += m.accepted ? 1 : 0;
  out << "\n[clustering]\n"
      << "cluster_count = " << report.cluster_count() << '\n'
      << "merges_accepted = " << accepted << '\n'
      << "terminated_by_rejection = " << (!log.empty() && !log.back().accepted ? "yes" : "no")
      << '\n'
      << "cluster_lengths =";
  for (int len : report.cluster_lengths()) out << ' ' << len;
  out << '\n';

  out << "\n[matching]\n"
      << "# cluster start end center source_index appearance motion total\n";
  for (const auto& a : report.matching.assignments) {
    out << "assignment = " << a.cluster << ' ' << a.span.start << ' ' << a.span.end << ' '
        << a.anchor_frame() << ' ' << a.source_index << ' ' << a.appearance << ' ' << a.motion
        << ' ' << a.total << '\n';
  }

  if (report.mismatches) {
    out << "\n[validation]\n"
        << "mismatches = " << *report.mismatches << '\n'
        << "mismatch_rate = " << report.mismatch_rate() << '\n';
  }

  if (!report.frames.empty()) {
    out << "\n[composite]\n"
        << "# frame source_before source_after beta2 mask_area poisson_iterations\n";
    for (const auto& f : report.frames) {
      out << "frame = " << f.frame << ' ' << f.source_before << ' ' << f.source_after << ' '
          << f.beta2 << ' ' << f.mask_area << ' ' << f.poisson_iterations << '\n';
    }
  }
  return out.str();
}

std::string format_timings(std::span<const StageTiming> timings) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << "[timing]\n";
  double total = 0.0;
  for (const auto& t : timings) {
    out << t.stage << "_seconds = " << t.seconds << '\n';
    total += t.seconds;
  }
  out << "total_seconds = " << total << '\n';
  return out.str();
}

}  // namespace reenact::pipeline
