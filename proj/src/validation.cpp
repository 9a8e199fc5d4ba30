#include "odlat/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace odlat {

namespace {

constexpr std::size_t kKeptViolations = 64;

class Checker {
 public:
  Checker(ValidationReport &report, std::string component, Millis lo, Millis hi)
      : report_(report) {
    check_.component = std::move(component);
    check_.lo = lo;
    check_.hi = hi;
    check_.observed_min = std::numeric_limits<double>::infinity();
    check_.observed_max = -std::numeric_limits<double>::infinity();
  }

  void add(std::int64_t index, Millis v) {
    ++check_.samples;
    check_.observed_min = std::min(check_.observed_min, v);
    check_.observed_max = std::max(check_.observed_max, v);
    if (v < check_.lo - kBoundTolerance || v > check_.hi + kBoundTolerance) {
      ++check_.violations;
      ++report_.violation_count;
      if (report_.violations.size() < kKeptViolations)
        report_.violations.push_back({check_.component, index, v, check_.lo, check_.hi});
    }
  }

  void finish() {
    if (check_.samples == 0) check_.observed_min = check_.observed_max = 0.0;
    report_.checks.push_back(check_);
  }

 private:
  ValidationReport &report_;
  BoundCheck check_;
};

}  // namespace

bool in_steady_state(const SimResult &sim, const FrameRecord &frame) {
  return sim.steady_state_start == 0 || frame.decision > sim.steady_state_start;
}

ValidationReport validate_against_analysis(const SimResult &sim, const E2EBounds &b,
                                           Millis shrink) {
  ValidationReport report;
  // Steady-state queue bounds only hold once the queue has filled.
  const bool filter = b.variant.uses_queue() && b.queue_case == QueueCase::kCase2;
  auto steady = [&](const FrameRecord &f) { return !filter || in_steady_state(sim, f); };

  Checker transfer(report, "transfer", b.camera.d_tran_min + shrink, b.camera.d_tran_max - shrink);
  Checker camera(report, "camera", b.camera.d_camera_min + shrink, b.camera.d_camera_max - shrink);
  Checker queue(report, "queue", b.queue.d_queue_min + shrink, b.queue.d_queue_max - shrink);
  Checker detector(report, "detector", b.detector.d_detector_min + shrink,
                   b.detector.d_detector_max - shrink);
  Checker blocking(report, "blocking", b.detector.b_fetch_min + shrink,
                   b.detector.b_fetch_max - shrink);
  Checker e2e(report, "e2e", b.total_min + shrink, b.total_max - shrink);

  for (std::size_t i = 0; i < sim.frames.size(); ++i) {
    const FrameRecord &f = sim.frames[i];
    const auto idx = static_cast<std::int64_t>(i);
    transfer.add(idx, to_ms(f.arrival - f.capture));
    if (f.fate != FrameFate::kFetched) continue;
    if (!steady(f)) {
      ++report.transient_samples;
      continue;
    }
    queue.add(idx, to_ms(f.dequeue - f.arrival));
    if (f.display_end >= 0) detector.add(idx, to_ms(f.display_end - f.dequeue));
  }

  for (std::size_t i = 0; i < sim.cycles.size(); ++i) {
    const CycleRecord &c = sim.cycles[i];
    if (c.fetched_frame < 0 || c.fetch_end < 0) continue;
    if (!steady(sim.frames[static_cast<std::size_t>(c.fetched_frame)])) continue;
    blocking.add(static_cast<std::int64_t>(i), to_ms(c.b_fetch));
  }

  for (std::size_t i = 0; i < sim.objects.size(); ++i) {
    const ObjectRecord &o = sim.objects[i];
    if (o.frame < 0) continue;
    const FrameRecord &f = sim.frames[static_cast<std::size_t>(o.frame)];
    if (!steady(f)) continue;
    const auto idx = static_cast<std::int64_t>(i);
    camera.add(idx, to_ms(f.arrival - o.appear));
    if (o.display_end >= 0) e2e.add(idx, to_ms(o.display_end - o.appear));
  }

  for (Checker *c : {&transfer, &camera, &queue, &detector, &blocking, &e2e}) c->finish();
  return report;
}

std::vector<Millis> steady_e2e(const SimResult &sim) {
  std::vector<Millis> out;
  out.reserve(sim.objects.size());
  for (const ObjectRecord &o : sim.objects) {
    if (o.frame < 0 || o.display_end < 0) continue;
    if (!in_steady_state(sim, sim.frames[static_cast<std::size_t>(o.frame)])) continue;
    out.push_back(to_ms(o.display_end - o.appear));
  }
  return out;
}

RunStats run_stats(const SimResult &sim) {
  RunStats st;
  std::vector<Millis> e2e = steady_e2e(sim);
  st.objects = e2e.size();
  st.frames = sim.frames.size();
  st.drops = sim.drops;
  if (!e2e.empty()) {
    st.mean_e2e = std::accumulate(e2e.begin(), e2e.end(), 0.0) / static_cast<double>(e2e.size());
    std::sort(e2e.begin(), e2e.end());
    auto pick = [&](double q) {
      const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(e2e.size())));
      return e2e[std::clamp<std::size_t>(k, 1, e2e.size()) - 1];
    };
    st.p50_e2e = pick(0.5);
    st.p99_e2e = pick(0.99);
    st.max_e2e = e2e.back();
  }
  // Cycles inside the queue fill-up transient are left out as well.
  double cyc = 0.0;
  std::size_t n = 0;
  for (const CycleRecord &c : sim.cycles) {
    if (c.end < 0 || c.start < sim.steady_state_start) continue;
    cyc += to_ms(c.end - c.start);
    ++n;
  }
  st.mean_cycle = n ? cyc / static_cast<double>(n) : 0.0;
  if (!sim.queue_delays.empty())
    st.mean_queue = std::accumulate(sim.queue_delays.begin(), sim.queue_delays.end(), 0.0) /
                    static_cast<double>(sim.queue_delays.size());
  return st;
}

}  // namespace odlat
