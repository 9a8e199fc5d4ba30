#ifndef ODLAT_REPORT_HPP_
#define ODLAT_REPORT_HPP_

#include <span>
#include <string>
#include <vector>

#include "odlat/analyzer.hpp"
#include "odlat/simulator.hpp"
#include "odlat/validation.hpp"

namespace odlat {

enum class OutputFormat { kTable, kCsv };

std::string format_ms(double v, int decimals = 3);

std::string bounds_report(const std::vector<E2EBounds> &rows, OutputFormat fmt);
std::string bounds_json(const std::vector<E2EBounds> &rows);

std::string comparison_report(const std::vector<VariantComparison> &rows, OutputFormat fmt);

struct SimSummaryRow {
  PipelineVariant variant;
  RunStats stats;
};
std::string sim_summary_report(const std::vector<SimSummaryRow> &rows, Millis arrival_mean,
                               OutputFormat fmt);
std::string sim_summary_json(const PipelineVariant &variant, const SimResult &sim,
                             const RunStats &stats, std::uint64_t seed);

// "bin_start_ms,count" rows for every non-empty bin of width bin_width.
std::string histogram_csv(std::span<const double> samples, Millis bin_width = 1.0);
std::string samples_csv(std::span<const double> samples, const std::string &column);

std::string validation_report(const PipelineVariant &variant, const E2EBounds &bounds,
                              const ValidationReport &report, OutputFormat fmt);

struct SweepRow {
  std::string value;
  double order = 0.0;  // sort key
  Millis mean_delay = 0.0;
  Millis mean_cycle = 0.0;
};
// Rows are sorted by order before printing.
std::string sweep_report(const std::string &param, std::vector<SweepRow> rows, OutputFormat fmt);

}  // namespace odlat

#endif  // ODLAT_REPORT_HPP_
