#ifndef ODLAT_ANALYZER_HPP_
#define ODLAT_ANALYZER_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "odlat/camera.hpp"
#include "odlat/detector.hpp"
#include "odlat/dist.hpp"
#include "odlat/queue.hpp"

namespace odlat {

struct SystemModel {
  CameraConfig camera;
  UsbLinkConfig usb;
  StageProfile profile;

  void validate() const;
};

struct E2EBounds {
  PipelineVariant variant = PipelineVariant::on_demand();
  QueueCase queue_case = QueueCase::kCase3;
  DelayDist arrivals = DelayDist::constant(0.0);
  // Blocking-time distribution fed into the fetch stage.
  DelayDist b_fetch = DelayDist::constant(0.0);
  CameraDelayBounds camera{};
  QueueDelayBounds queue{};
  DetectorDelayBounds detector{DelayDist::constant(0.0), 0, 0, 0, 0, 0, 0, false};
  Millis total_min = 0.0;
  Millis total_max = 0.0;
  // Vanilla only: the queue never runs dry in steady state, so fetch never
  // blocks. Otherwise blocking is covered by an envelope over its range.
  bool blocking_free = false;
  bool fetch_dominates = false;
};

// Service distribution with execution times only (no fetch blocking); used
// for queue-case classification.
DelayDist execution_service(const SystemModel &m);

E2EBounds analyze(const SystemModel &m, const PipelineVariant &variant);

// Largest fetch offset that keeps the on-demand cycle time unchanged.
Millis safe_theta(const SystemModel &m);

struct CompareOptions {
  int queue_size = 4;
  std::optional<Millis> theta;  // zero-slack offset; safe_theta() when unset
  Millis duration = 60'000.0;
  std::uint64_t seed = 1;
  std::size_t objects = 2000;
  Millis warmup = 2'000.0;
};

struct VariantComparison {
  E2EBounds bounds;
  Millis mean_e2e = 0.0;
  Millis p99_e2e = 0.0;
  Millis mean_cycle = 0.0;
  double reduction_pct = 0.0;     // against the previous row
  double cumulative_pct = 0.0;    // against the first row
};

// Vanilla(Q) -> on-demand -> zero-slack -> contention-free, each simulated
// with the same seed.
std::vector<PipelineVariant> staged_variants(const SystemModel &m, const CompareOptions &opt);
std::vector<VariantComparison> compare_variants(const SystemModel &m, const CompareOptions &opt);

}  // namespace odlat

#endif  // ODLAT_ANALYZER_HPP_
