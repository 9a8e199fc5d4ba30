#include "odlat/analyzer.hpp"

#include <algorithm>

#include "odlat/simulator.hpp"
#include "odlat/validation.hpp"

namespace odlat {

namespace {

// Resolution of the blocking-time envelope.
constexpr Millis kBlockingGridStep = 1.0;

DelayDist blocking_envelope(Millis lo, Millis hi) {
  return DelayDist::uniform_grid(lo, hi, kBlockingGridStep);
}

}  // namespace

void SystemModel::validate() const {
  camera.validate();
  usb.validate();
  profile.validate();
}

DelayDist execution_service(const SystemModel &m) {
  return service_distribution(m.profile, PipelineVariant::on_demand(), DelayDist::constant(0.0))
      .dist;
}

E2EBounds analyze(const SystemModel &m, const PipelineVariant &variant) {
  m.validate();
  const std::uint64_t bytes = frame_size(m.camera);
  const TransferBounds tran = transfer_delay_bounds(bytes, m.usb);
  const BlockingBounds blk = blocking_bounds(m.camera, m.usb, bytes);
  const Millis c = m.camera.cycle_time();

  E2EBounds out;
  out.variant = variant;
  out.arrivals = arrival_distribution(m.camera, m.usb);
  const DelayDist s0 = execution_service(m);
  out.queue_case = classify(out.arrivals, s0);

  BlockingBounds used = blk;
  if (variant.uses_queue()) {
    // A full queue hands over an already arrived frame at every cycle start
    // once Q cycles cover the longest capture-to-arrival gap.
    out.blocking_free = out.queue_case == QueueCase::kCase2 &&
                        variant.queue_size() * s0.min() >= tran.max_exclusive + c;
    used = out.blocking_free ? BlockingBounds{0.0, 0.0} : BlockingBounds{0.0, blk.b_fetch_max};
  }
  out.b_fetch = out.blocking_free ? DelayDist::constant(0.0)
                                  : blocking_envelope(used.b_fetch_min, used.b_fetch_max);

  const ServiceDistribution s = service_distribution(m.profile, variant, out.b_fetch);
  out.fetch_dominates = s.fetch_dominates;
  out.detector =
      detector_delay_bounds(s.dist, display_delay_dist(m.profile, true), variant, used);
  out.camera = camera_delay_bounds(m.camera, m.usb, s.dist.max());
  out.queue = variant.uses_queue()
                  ? queue_delay_bounds(out.queue_case, variant.queue_size(), s.dist.min(),
                                       s.dist.max(), tran.min, tran.max_exclusive, c,
                                       m.usb.urb_period())
                  : QueueDelayBounds{out.queue_case, 0.0, 0.0};

  out.total_min = out.camera.d_camera_min + out.queue.d_queue_min + out.detector.d_detector_min;
  out.total_max = out.camera.d_camera_max + out.queue.d_queue_max + out.detector.d_detector_max;
  return out;
}

Millis safe_theta(const SystemModel &m) {
  m.validate();
  const BlockingBounds blk = blocking_bounds(m.camera, m.usb, frame_size(m.camera));
  const DelayDist s = service_distribution(m.profile, PipelineVariant::on_demand(),
                                           blocking_envelope(blk.b_fetch_min, blk.b_fetch_max))
                          .dist;
  return compute_theta_fetch(m.profile, s.min(), blk.b_fetch_max);
}

std::vector<PipelineVariant> staged_variants(const SystemModel &m, const CompareOptions &opt) {
  std::vector<PipelineVariant> out;
  if (opt.queue_size > 0) out.push_back(PipelineVariant::vanilla(opt.queue_size));
  out.push_back(PipelineVariant::on_demand());
  out.push_back(PipelineVariant::zero_slack(opt.theta ? *opt.theta : safe_theta(m)));
  out.push_back(PipelineVariant::contention_free());
  return out;
}

std::vector<VariantComparison> compare_variants(const SystemModel &m, const CompareOptions &opt) {
  std::vector<VariantComparison> rows;
  for (const PipelineVariant &v : staged_variants(m, opt)) {
    SimConfig cfg;
    cfg.camera = m.camera;
    cfg.usb = m.usb;
    cfg.profile = m.profile;
    cfg.variant = v;
    cfg.duration = opt.duration;
    cfg.seed = opt.seed;
    cfg.objects.count = opt.objects;
    cfg.objects.warmup = opt.warmup;
    const RunStats st = run_stats(run(cfg));

    VariantComparison row;
    row.bounds = analyze(m, v);
    row.mean_e2e = st.mean_e2e;
    row.p99_e2e = st.p99_e2e;
    row.mean_cycle = st.mean_cycle;
    if (!rows.empty()) {
      const Millis prev = rows.back().mean_e2e;
      const Millis first = rows.front().mean_e2e;
      row.reduction_pct = prev > 0.0 ? 100.0 * (prev - row.mean_e2e) / prev : 0.0;
      row.cumulative_pct = first > 0.0 ? 100.0 * (first - row.mean_e2e) / first : 0.0;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace odlat
