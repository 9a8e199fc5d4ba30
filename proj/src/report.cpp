#include "odlat/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace odlat {

namespace {

using nlohmann::ordered_json;

// Plain text table with right-aligned numeric columns.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render(OutputFormat fmt) const {
    std::ostringstream out;
    if (fmt == OutputFormat::kCsv) {
      for (const auto &r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
      }
      return out.str();
    }
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto &r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto &r = rows_[k];
      for (std::size_t i = 0; i < r.size(); ++i) {
        const std::string pad(width[i] - r[i].size(), ' ');
        out << (i ? "  " : "") << (i == 0 ? r[i] + pad : pad + r[i]);
      }
      out << '\n';
      if (k == 0) {
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        out << std::string(total - 2, '-') << '\n';
      }
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string title(const std::string &text, OutputFormat fmt) {
  return fmt == OutputFormat::kTable ? text + "\n\n" : "";
}

// JSON numbers rounded to the nanosecond so output does not carry float noise.
double clean(double v) { return std::round(v * 1e6) / 1e6; }

ordered_json dist_json(const DelayDist &d) {
  ordered_json pts = ordered_json::array();
  for (const auto &p : d.points()) pts.push_back({clean(p.value), p.prob});
  return pts;
}

}  // namespace

std::string format_ms(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string bounds_report(const std::vector<E2EBounds> &rows, OutputFormat fmt) {
  Table t({"variant", "case", "s_min", "s_max", "camera_min", "camera_max", "queue_min",
           "queue_max", "detector_min", "detector_max", "b_fetch_min", "b_fetch_max", "total_min",
           "total_max"});
  for (const auto &b : rows) {
    t.add({b.variant.name(), to_string(b.queue_case), format_ms(b.detector.s_min),
           format_ms(b.detector.s_max), format_ms(b.camera.d_camera_min),
           format_ms(b.camera.d_camera_max), format_ms(b.queue.d_queue_min),
           format_ms(b.queue.d_queue_max), format_ms(b.detector.d_detector_min),
           format_ms(b.detector.d_detector_max), format_ms(b.detector.b_fetch_min),
           format_ms(b.detector.b_fetch_max), format_ms(b.total_min), format_ms(b.total_max)});
  }
  std::string out = title("end-to-end delay bounds per pipeline variant (ms)", fmt) + t.render(fmt);
  if (fmt == OutputFormat::kTable) {
    for (const auto &b : rows) {
      if (b.detector.clamped)
        out += "warning: " + b.variant.name() + ": a detector bound was negative and clamped to 0\n";
      if (b.fetch_dominates)
        out += "warning: " + b.variant.name() + ": the fetch stage now sets the cycle time\n";
      if (b.variant.uses_queue() && b.queue_case == QueueCase::kCase3)
        out += "note: " + b.variant.name() + ": case3 queue delay is only bounded by [0, case2 max]\n";
    }
  }
  return out;
}

std::string bounds_json(const std::vector<E2EBounds> &rows) {
  ordered_json arr = ordered_json::array();
  for (const auto &b : rows) {
    ordered_json j;
    j["variant"] = b.variant.name();
    j["queue_case"] = to_string(b.queue_case);
    j["arrivals"] = dist_json(b.arrivals);
    j["service"] = dist_json(b.detector.s_dist);
    j["frame_size_bytes"] = b.camera.frame_size;
    j["transfer"] = {{"min", clean(b.camera.d_tran_min)}, {"max", clean(b.camera.d_tran_max)}};
    j["capture_max"] = clean(b.camera.d_capt_max);
    j["camera"] = {{"min", clean(b.camera.d_camera_min)}, {"max", clean(b.camera.d_camera_max)}};
    j["queue"] = {{"min", clean(b.queue.d_queue_min)}, {"max", clean(b.queue.d_queue_max)}};
    j["detector"] = {{"min", clean(b.detector.d_detector_min)},
                     {"max", clean(b.detector.d_detector_max)},
                     {"clamped", b.detector.clamped}};
    j["b_fetch"] = {{"min", clean(b.detector.b_fetch_min)}, {"max", clean(b.detector.b_fetch_max)}};
    j["theta_fetch"] = clean(b.variant.theta_fetch());
    j["total"] = {{"min", clean(b.total_min)}, {"max", clean(b.total_max)}};
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string comparison_report(const std::vector<VariantComparison> &rows, OutputFormat fmt) {
  Table t({"variant", "total_min", "total_max", "sim_mean_e2e", "sim_p99_e2e", "sim_mean_cycle",
           "reduction_pct", "cumulative_pct"});
  for (const auto &r : rows)
    t.add({r.bounds.variant.name(), format_ms(r.bounds.total_min), format_ms(r.bounds.total_max),
           format_ms(r.mean_e2e), format_ms(r.p99_e2e), format_ms(r.mean_cycle),
           format_ms(r.reduction_pct, 1), format_ms(r.cumulative_pct, 1)});
  return title("incremental delay optimization: vanilla, on-demand capture, zero-slack, "
               "contention-free (ms)",
               fmt) +
         t.render(fmt);
}

std::string sim_summary_report(const std::vector<SimSummaryRow> &rows, Millis arrival_mean,
                               OutputFormat fmt) {
  Table t({"variant", "objects", "mean_e2e", "p50_e2e", "p99_e2e", "max_e2e", "mean_cycle",
           "mean_queue", "frames", "drops"});
  for (const auto &r : rows)
    t.add({r.variant.name(), std::to_string(r.stats.objects), format_ms(r.stats.mean_e2e),
           format_ms(r.stats.p50_e2e), format_ms(r.stats.p99_e2e), format_ms(r.stats.max_e2e),
           format_ms(r.stats.mean_cycle), format_ms(r.stats.mean_queue),
           std::to_string(r.stats.frames), std::to_string(r.stats.drops)});
  return title("simulated delays (ms), mean camera arrival interval " + format_ms(arrival_mean),
               fmt) +
         t.render(fmt);
}

std::string sim_summary_json(const PipelineVariant &variant, const SimResult &sim,
                             const RunStats &st, std::uint64_t seed) {
  ordered_json j;
  j["variant"] = variant.name();
  j["seed"] = seed;
  j["objects"] = st.objects;
  j["unresolved_objects"] = sim.unresolved_objects;
  j["late_objects"] = sim.late_objects;
  j["frames"] = st.frames;
  j["drops"] = st.drops;
  j["fetched"] = sim.count(FrameFate::kFetched);
  j["cycles"] = sim.cycle_times.size();
  j["steady_state_start_ms"] = clean(to_ms(sim.steady_state_start));
  j["end_time_ms"] = clean(to_ms(sim.end_time));
  j["mean_e2e_ms"] = clean(st.mean_e2e);
  j["p50_e2e_ms"] = clean(st.p50_e2e);
  j["p99_e2e_ms"] = clean(st.p99_e2e);
  j["max_e2e_ms"] = clean(st.max_e2e);
  j["mean_cycle_ms"] = clean(st.mean_cycle);
  j["mean_queue_ms"] = clean(st.mean_queue);
  j["utilization"] = {{"fetch", clean(sim.per_stage_busy.fetch)},
                      {"infer", clean(sim.per_stage_busy.infer)},
                      {"disp", clean(sim.per_stage_busy.disp)}};
  return j.dump(2) + "\n";
}

std::string histogram_csv(std::span<const double> samples, Millis bin_width) {
  std::map<long long, std::size_t> bins;
  for (double v : samples) ++bins[static_cast<long long>(std::floor(v / bin_width + 1e-9))];
  std::ostringstream out;
  out << "bin_start_ms,count\n";
  for (const auto &[k, n] : bins) out << format_ms(static_cast<double>(k) * bin_width) << ',' << n << '\n';
  return out.str();
}

std::string samples_csv(std::span<const double> samples, const std::string &column) {
  std::ostringstream out;
  out << column << '\n';
  for (double v : samples) out << format_ms(v, 6) << '\n';
  return out.str();
}

std::string validation_report(const PipelineVariant &variant, const E2EBounds &bounds,
                              const ValidationReport &report, OutputFormat fmt) {
  Table t({"component", "lo", "hi", "observed_min", "observed_max", "margin_low", "margin_high",
           "samples", "violations"});
  for (const auto &c : report.checks)
    t.add({c.component, format_ms(c.lo), format_ms(c.hi), format_ms(c.observed_min),
           format_ms(c.observed_max), format_ms(c.margin_low()), format_ms(c.margin_high()),
           std::to_string(c.samples), std::to_string(c.violations)});
  std::string out = title(variant.name() + " [" + to_string(bounds.queue_case) + "]: " +
                              (report.ok() ? "PASS" : "FAIL") + ", simulated delays against bounds",
                          fmt);
  out += t.render(fmt);
  if (fmt == OutputFormat::kTable) {
    if (report.transient_samples)
      out += "skipped " + std::to_string(report.transient_samples) +
             " frames from the queue fill-up transient\n";
    if (variant.uses_queue() && bounds.queue_case == QueueCase::kCase3)
      out += "note: case3 queue delays are checked against the [0, case2 max] envelope only\n";
    for (const auto &v : report.violations)
      out += "violation: " + v.component + " #" + std::to_string(v.index) + " = " +
             format_ms(v.value, 6) + " outside [" + format_ms(v.lo, 6) + ", " + format_ms(v.hi, 6) +
             "]\n";
    out += "\n";
  }
  return out;
}

std::string sweep_report(const std::string &param, std::vector<SweepRow> rows, OutputFormat fmt) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow &a, const SweepRow &b) { return a.order < b.order; });
  Table t({param, "mean_delay_ms", "mean_cycle_ms"});
  for (const auto &r : rows) t.add({r.value, format_ms(r.mean_delay), format_ms(r.mean_cycle)});
  return title("mean end-to-end delay and detection cycle time versus " + param, fmt) +
         t.render(fmt);
}

}  // namespace odlat
