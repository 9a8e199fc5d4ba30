#include "odlat/detector.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace odlat {

namespace {

std::string fmt_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void StageProfile::validate() const {
  for (const DelayDist *d : {&inflation.fetch, &inflation.infer, &inflation.disp})
    if (d->min() < 0.0) throw Error("contention inflation must be non-negative");
}

PipelineVariant PipelineVariant::vanilla(int queue_size) {
  if (queue_size < 0) throw Error("queue size must be >= 0");
  if (queue_size == 0) return on_demand();
  return PipelineVariant(Kind::kVanilla, queue_size, 0.0);
}

PipelineVariant PipelineVariant::zero_slack(Millis theta_fetch) {
  if (!(theta_fetch >= 0.0)) throw Error("theta_fetch must be >= 0");
  return PipelineVariant(Kind::kZeroSlack, 0, theta_fetch);
}

std::string PipelineVariant::name() const {
  switch (kind_) {
    case Kind::kVanilla:
      return "vanilla(Q=" + std::to_string(queue_size_) + ")";
    case Kind::kOnDemand:
      return "on_demand";
    case Kind::kZeroSlack:
      return "zero_slack(theta=" + fmt_ms(theta_) + ")";
    case Kind::kContentionFree:
      return "contention_free";
  }
  return "?";
}

std::string PipelineVariant::key() const {
  switch (kind_) {
    case Kind::kVanilla:
      return "vanilla_q" + std::to_string(queue_size_);
    case Kind::kOnDemand:
      return "on_demand";
    case Kind::kZeroSlack:
      return "zero_slack";
    case Kind::kContentionFree:
      return "contention_free";
  }
  return "unknown";
}

DelayDist fetch_exec_dist(const StageProfile &p, bool contended) {
  return contended ? convolve(p.fetch_exec, p.inflation.fetch) : p.fetch_exec;
}

DelayDist infer_delay_dist(const StageProfile &p, bool contended) {
  DelayDist d = convolve(p.infer_cpu, p.infer_gpu);
  return contended ? convolve(d, p.inflation.infer) : d;
}

DelayDist display_delay_dist(const StageProfile &p, bool contended) {
  DelayDist d = convolve(p.disp_exec, p.disp_block);
  return contended ? convolve(d, p.inflation.disp) : d;
}

DelayDist fetch_delay_dist(const StageProfile &p, const PipelineVariant &variant,
                           const DelayDist &b_fetch) {
  // Fetch always overlaps another stage: inference, or display when
  // inference is serialized.
  DelayDist d = convolve(fetch_exec_dist(p, true), b_fetch);
  if (variant.kind() == PipelineVariant::Kind::kZeroSlack) d = shift(d, variant.theta_fetch());
  return d;
}

ServiceDistribution service_distribution(const StageProfile &p, const PipelineVariant &variant,
                                         const DelayDist &b_fetch) {
  p.validate();
  const DelayDist d_fetch = fetch_delay_dist(p, variant, b_fetch);
  const DelayDist d_disp = display_delay_dist(p, true);
  ServiceDistribution out{d_fetch, false};
  if (variant.kind() == PipelineVariant::Kind::kContentionFree) {
    const std::array<DelayDist, 2> concurrent{d_fetch, d_disp};
    out.dist = convolve(max_combine(concurrent), infer_delay_dist(p, false));
    return out;
  }
  const DelayDist d_infer = infer_delay_dist(p, true);
  const std::array<DelayDist, 3> stages{d_fetch, d_infer, d_disp};
  out.dist = max_combine(stages);
  out.fetch_dominates = d_fetch.min() > std::max(d_infer.max(), d_disp.max());
  return out;
}

BlockingBounds blocking_bounds(const CameraConfig &cam, const UsbLinkConfig &usb,
                               std::uint64_t frame_bytes) {
  const TransferBounds tran = transfer_delay_bounds(frame_bytes, usb);
  return {std::max(0.0, tran.min - usb.urb_period()), tran.max_exclusive + cam.cycle_time()};
}

DetectorDelayBounds detector_delay_bounds(const DelayDist &s_dist, const DelayDist &d_disp,
                                          const PipelineVariant &variant,
                                          const BlockingBounds &blocking) {
  DetectorDelayBounds b{s_dist,
                        s_dist.min(),
                        s_dist.max(),
                        0.0,
                        0.0,
                        blocking.b_fetch_min,
                        blocking.b_fetch_max,
                        false};
  // A fetched frame is displayed two cycles later, or one cycle later when
  // inference runs serialized after fetch and display.
  const double cycles = variant.kind() == PipelineVariant::Kind::kContentionFree ? 1.0 : 2.0;
  const Millis theta =
      variant.kind() == PipelineVariant::Kind::kZeroSlack ? variant.theta_fetch() : 0.0;
  b.d_detector_min = cycles * b.s_min + d_disp.min() - blocking.b_fetch_max - theta;
  b.d_detector_max = cycles * b.s_max + d_disp.max() - blocking.b_fetch_min - theta;
  if (b.d_detector_min < 0.0) {
    b.d_detector_min = 0.0;
    b.clamped = true;
  }
  if (b.d_detector_max < 0.0) {
    b.d_detector_max = 0.0;
    b.clamped = true;
  }
  return b;
}

DetectorDelayBounds detector_delay_bounds(const StageProfile &p, const PipelineVariant &variant,
                                          const BlockingBounds &blocking,
                                          const DelayDist &b_fetch) {
  const ServiceDistribution s = service_distribution(p, variant, b_fetch);
  return detector_delay_bounds(s.dist, display_delay_dist(p, true), variant, blocking);
}

Millis compute_theta_fetch(Millis s_min, Millis e_fetch_max, Millis b_fetch_max) {
  return std::max(0.0, s_min - e_fetch_max - b_fetch_max);
}

Millis compute_theta_fetch(const StageProfile &p, Millis s_min, Millis b_fetch_max) {
  return compute_theta_fetch(s_min, fetch_exec_dist(p, true).max(), b_fetch_max);
}

}  // namespace odlat
