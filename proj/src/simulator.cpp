#include "odlat/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>

namespace odlat {

Ticks to_ticks(Millis ms) { return std::llround(ms * static_cast<double>(kTicksPerMs)); }

std::string to_string(EventType t) {
  switch (t) {
    case EventType::kCapture:
      return "capture";
    case EventType::kDecision:
      return "decision";
    case EventType::kEnqueue:
      return "enqueue";
    case EventType::kDrop:
      return "drop";
    case EventType::kArrival:
      return "arrival";
    case EventType::kFetchRelease:
      return "fetch_release";
    case EventType::kFetchStart:
      return "fetch_start";
    case EventType::kFetchEnd:
      return "fetch_end";
    case EventType::kInferStart:
      return "infer_start";
    case EventType::kInferEnd:
      return "infer_end";
    case EventType::kDisplayStart:
      return "display_start";
    case EventType::kDisplayEnd:
      return "display_end";
    case EventType::kJoin:
      return "join";
  }
  return "?";
}

void SimConfig::validate() const {
  camera.validate();
  usb.validate();
  profile.validate();
  if (!(duration > 0.0)) throw Error("simulation duration must be positive");
  if (!(std::max({profile.fetch_exec.min(), infer_delay_dist(profile, false).min(),
                  display_delay_dist(profile, false).min()}) > 0.0))
    throw Error("stage profile yields a zero-length detection cycle");
  if (objects.kind == ObjectInjection::Kind::kUniform) {
    if (objects.count < 1) throw Error("object count must be >= 1");
    if (objects.warmup < 0.0 || objects.warmup >= duration)
      throw Error("object warmup must lie in [0, duration)");
  } else {
    if (objects.times.empty()) throw Error("explicit object list is empty");
    for (Millis t : objects.times)
      if (!(t >= 0.0)) throw Error("object appearance times must be >= 0");
  }
  if (urb_phase && (*urb_phase < 0.0 || *urb_phase >= usb.urb_period()))
    throw Error("urb_phase must lie in [0, M*U)");
}

std::size_t SimResult::count(FrameFate fate) const {
  return static_cast<std::size_t>(std::count_if(
      frames.begin(), frames.end(), [fate](const FrameRecord &f) { return f.fate == fate; }));
}

namespace {

Ticks floor_div(Ticks a, Ticks b) {
  Ticks q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// First grid point phase + m * period that is >= t.
Ticks grid_ceil(Ticks t, Ticks phase, Ticks period) {
  return phase + floor_div(t - phase + period - 1, period) * period;
}

// First grid point phase + m * period that is > t.
Ticks grid_after(Ticks t, Ticks phase, Ticks period) {
  return phase + (floor_div(t - phase, period) + 1) * period;
}

// Simultaneous events resolve in this order, then by scheduling sequence.
enum class EventKind : std::uint8_t {
  kCapture = 0,
  kArrival = 1,
  kDecision = 2,
  kCycleStart = 3,
  kFetchRelease = 4,
  kFetchEnd = 5,
  kInferEnd = 6,
  kDisplayEnd = 7,
};

struct Event {
  Ticks time;
  EventKind kind;
  std::uint64_t seq;
  std::int64_t arg;
};

struct EventLater {
  bool operator()(const Event &a, const Event &b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
  }
};

class Simulation {
 public:
  explicit Simulation(const SimConfig &cfg)
      : cfg_(cfg),
        variant_(cfg.variant),
        camera_rng_(derive_seed(cfg.seed, 1)),
        stage_rng_(derive_seed(cfg.seed, 2)),
        object_rng_(derive_seed(cfg.seed, 3)),
        fetch_dist_(fetch_exec_dist(cfg.profile, true)),
        infer_dist_(infer_delay_dist(cfg.profile, cfg.variant.inference_contended())),
        disp_dist_(display_delay_dist(cfg.profile, true)) {
    cycle_ms_ = cfg.camera.cycle_time();
    microframe_ = to_ticks(cfg.usb.microframe_len);
    urb_ = microframe_ * cfg.usb.urb_microframes;
    data_ticks_ = microframe_ * transfer_microframes(frame_size(cfg.camera), cfg.usb);
    jitter_ = to_ticks(cfg.camera.capture_jitter);
    min_capture_ = to_ticks(cfg.camera.min_capture_delay);
    phase_ = cfg.urb_phase ? to_ticks(*cfg.urb_phase)
                           : static_cast<Ticks>(camera_rng_.below(static_cast<std::uint64_t>(urb_)));
    duration_ = to_ticks(cfg.duration);
    theta_ = variant_.kind() == PipelineVariant::Kind::kZeroSlack ? to_ticks(variant_.theta_fetch())
                                                                  : 0;
    const Millis b_max = blocking_bounds(cfg.camera, cfg.usb, frame_size(cfg.camera)).b_fetch_max;
    const Millis worst_cycle = fetch_dist_.max() + b_max + variant_.theta_fetch() +
                               infer_dist_.max() + disp_dist_.max() + cycle_ms_;
    hard_stop_ = duration_ + to_ticks(10.0 * (variant_.queue_size() + 3) * worst_cycle) +
                 10'000 * kTicksPerMs;
  }

  SimResult run() {
    inject_objects();
    schedule(0, EventKind::kCapture, 0);
    schedule(0, EventKind::kCycleStart, 0);

    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.time >= duration_ && resolved_ == res_.objects.size()) break;
      if (ev.time > hard_stop_) break;
      events_.pop();
      now_ = ev.time;
      dispatch(ev);
    }
    finish();
    return std::move(res_);
  }

 private:
  void schedule(Ticks t, EventKind kind, std::int64_t arg) {
    events_.push({t, kind, seq_++, arg});
  }

  void trace(EventType type, std::int64_t frame, std::int64_t detail) {
    if (cfg_.record_trace) res_.trace.push_back({now_, type, frame, detail});
  }

  void inject_objects() {
    std::vector<Ticks> times;
    if (cfg_.objects.kind == ObjectInjection::Kind::kUniform) {
      const Ticks lo = to_ticks(cfg_.objects.warmup);
      const double span = static_cast<double>(duration_ - lo);
      times.reserve(cfg_.objects.count);
      for (std::size_t i = 0; i < cfg_.objects.count; ++i)
        times.push_back(lo + static_cast<Ticks>(std::floor(object_rng_.uniform01() * span)));
    } else {
      for (Millis t : cfg_.objects.times) {
        const Ticks tt = to_ticks(t);
        if (tt >= duration_) {
          ++res_.late_objects;
          continue;
        }
        times.push_back(tt);
      }
    }
    std::sort(times.begin(), times.end());
    res_.objects.reserve(times.size());
    for (Ticks t : times) res_.objects.push_back({t, -1, -1});
  }

  Ticks capture_time(std::int64_t k) {
    Ticks t = std::llround(static_cast<double>(k) * cycle_ms_ * static_cast<double>(kTicksPerMs));
    if (jitter_ > 0) {
      const double u = camera_rng_.uniform01() * 2.0 - 1.0;
      t += std::llround(u * static_cast<double>(jitter_));
    }
    return t;
  }

  void dispatch(const Event &ev) {
    switch (ev.kind) {
      case EventKind::kCapture:
        on_capture(ev.arg);
        break;
      case EventKind::kArrival:
        on_arrival(ev.arg);
        break;
      case EventKind::kDecision:
        on_decision(ev.arg);
        break;
      case EventKind::kCycleStart:
        on_cycle_start(ev.arg);
        break;
      case EventKind::kFetchRelease:
        on_fetch_release();
        break;
      case EventKind::kFetchEnd:
        on_fetch_end();
        break;
      case EventKind::kInferEnd:
        on_infer_end();
        break;
      case EventKind::kDisplayEnd:
        on_display_end();
        break;
    }
  }

  void on_capture(std::int64_t k) {
    FrameRecord f;
    f.capture = now_;
    f.decision = grid_after(now_, phase_, urb_);
    const Ticks first_microframe = grid_ceil(now_, phase_, microframe_);
    f.arrival = grid_ceil(first_microframe + data_ticks_, phase_, urb_);
    res_.frames.push_back(f);
    trace(EventType::kCapture, k, 0);
    schedule(f.decision, EventKind::kDecision, k);
    schedule(f.arrival, EventKind::kArrival, k);

    const Ticks next = capture_time(k + 1);
    if (next < duration_ || resolved_ < res_.objects.size())
      schedule(std::max(next, now_), EventKind::kCapture, k + 1);
  }

  std::size_t depth() const {
    return variant_.uses_queue() ? queue_.size() : (on_demand_frame_ >= 0 ? 1 : 0);
  }

  void record_depth() {
    res_.occupancy_trace.emplace_back(to_ms(now_), static_cast<int>(depth()));
  }

  void on_decision(std::int64_t k) {
    FrameRecord &f = res_.frames[static_cast<std::size_t>(k)];
    trace(EventType::kDecision, k, 0);
    bool accept = false;
    if (variant_.uses_queue()) {
      accept = queue_.size() < static_cast<std::size_t>(variant_.queue_size());
      if (accept) queue_.push_back(k);
    } else if (armed_) {
      accept = true;
      armed_ = false;
      on_demand_frame_ = k;
    }

    if (!accept) {
      f.fate = FrameFate::kDropped;
      ++res_.drops;
      if (variant_.uses_queue() && !saw_drop_) {
        saw_drop_ = true;
        res_.steady_state_start = now_;
      }
      trace(EventType::kDrop, k, static_cast<std::int64_t>(depth()));
      return;
    }

    f.fate = FrameFate::kQueued;
    // Every object that appeared since the previous successful capture is
    // first seen in this frame.
    f.object_begin = next_object_;
    while (next_object_ < res_.objects.size() &&
           res_.objects[next_object_].appear + min_capture_ <= f.capture) {
      res_.objects[next_object_].frame = k;
      ++next_object_;
    }
    f.object_end = next_object_;
    trace(EventType::kEnqueue, k, static_cast<std::int64_t>(depth()));
    record_depth();
  }

  void on_arrival(std::int64_t k) {
    FrameRecord &f = res_.frames[static_cast<std::size_t>(k)];
    if (f.fate != FrameFate::kQueued) return;
    f.arrived = true;
    trace(EventType::kArrival, k, 0);
    if (!fetch_waiting_) return;
    if (variant_.uses_queue()) {
      if (!queue_.empty() && queue_.front() == k) dequeue(k);
    } else if (k == on_demand_frame_) {
      dequeue(k);
    }
  }

  void on_cycle_start(std::int64_t i) {
    CycleRecord c;
    c.start = now_;
    c.e_fetch = to_ticks(sample(fetch_dist_, stage_rng_));
    c.infer = to_ticks(sample(infer_dist_, stage_rng_));
    c.disp = to_ticks(sample(disp_dist_, stage_rng_));
    c.displayed_frame = to_display_;
    res_.cycles.push_back(c);
    cycle_ = i;
    trace(EventType::kJoin, -1, i);

    start_display();
    if (variant_.kind() == PipelineVariant::Kind::kContentionFree) {
      pending_ = 2;  // fetch and display, then inference alone
      schedule(now_, EventKind::kFetchRelease, i);
    } else {
      pending_ = 3;
      start_inference(to_infer_);
      schedule(now_ + theta_, EventKind::kFetchRelease, i);
    }
  }

  CycleRecord &cycle() { return res_.cycles.back(); }

  void start_display() {
    CycleRecord &c = cycle();
    if (c.displayed_frame >= 0) {
      res_.frames[static_cast<std::size_t>(c.displayed_frame)].display_start = now_;
      trace(EventType::kDisplayStart, c.displayed_frame, cycle_);
    }
    schedule(now_ + c.disp, EventKind::kDisplayEnd, cycle_);
  }

  void start_inference(std::int64_t frame) {
    CycleRecord &c = cycle();
    c.inferred_frame = frame;
    if (frame >= 0) {
      res_.frames[static_cast<std::size_t>(frame)].infer_start = now_;
      trace(EventType::kInferStart, frame, cycle_);
    }
    schedule(now_ + c.infer, EventKind::kInferEnd, cycle_);
  }

  void on_fetch_release() {
    CycleRecord &c = cycle();
    c.fetch_release = now_;
    trace(EventType::kFetchRelease, -1, cycle_);
    fetch_waiting_ = true;
    if (variant_.uses_queue()) {
      if (!queue_.empty() && res_.frames[static_cast<std::size_t>(queue_.front())].arrived)
        dequeue(queue_.front());
    } else {
      // Offer the single buffer; the next frame decided after this point fills it.
      armed_ = true;
    }
  }

  void dequeue(std::int64_t k) {
    FrameRecord &f = res_.frames[static_cast<std::size_t>(k)];
    CycleRecord &c = cycle();
    fetch_waiting_ = false;
    if (variant_.uses_queue()) {
      queue_.pop_front();
    } else {
      on_demand_frame_ = -1;
    }
    f.fate = FrameFate::kFetched;
    f.dequeue = now_;
    f.fetch_cycle = cycle_;
    c.fetched_frame = k;
    c.b_fetch = now_ - c.fetch_release;
    res_.queue_delays.push_back(to_ms(now_ - f.arrival));
    trace(EventType::kFetchStart, k, cycle_);
    record_depth();
    schedule(now_ + c.e_fetch, EventKind::kFetchEnd, cycle_);
  }

  void on_fetch_end() {
    CycleRecord &c = cycle();
    c.fetch_end = now_;
    if (c.fetched_frame >= 0) res_.frames[static_cast<std::size_t>(c.fetched_frame)].fetch_end = now_;
    trace(EventType::kFetchEnd, c.fetched_frame, cycle_);
    stage_done();
  }

  void on_infer_end() {
    CycleRecord &c = cycle();
    if (c.inferred_frame >= 0) {
      res_.frames[static_cast<std::size_t>(c.inferred_frame)].infer_end = now_;
    }
    trace(EventType::kInferEnd, c.inferred_frame, cycle_);
    if (variant_.kind() == PipelineVariant::Kind::kContentionFree) {
      join();
    } else {
      stage_done();
    }
  }

  void on_display_end() {
    CycleRecord &c = cycle();
    if (c.displayed_frame >= 0) {
      FrameRecord &f = res_.frames[static_cast<std::size_t>(c.displayed_frame)];
      f.display_end = now_;
      for (std::size_t o = f.object_begin; o < f.object_end; ++o) {
        res_.objects[o].display_end = now_;
        ++resolved_;
      }
    }
    trace(EventType::kDisplayEnd, c.displayed_frame, cycle_);
    stage_done();
  }

  void stage_done() {
    if (--pending_ > 0) return;
    if (variant_.kind() == PipelineVariant::Kind::kContentionFree) {
      pending_ = 1;
      start_inference(cycle().fetched_frame);
      return;
    }
    join();
  }

  void join() {
    CycleRecord &c = cycle();
    c.end = now_;
    res_.cycle_times.push_back(to_ms(c.end - c.start));
    if (variant_.kind() == PipelineVariant::Kind::kContentionFree) {
      to_display_ = c.fetched_frame;
    } else {
      to_display_ = c.inferred_frame;
      to_infer_ = c.fetched_frame;
    }
    schedule(now_, EventKind::kCycleStart, cycle_ + 1);
  }

  void finish() {
    res_.end_time = now_;
    res_.e2e_delays.reserve(res_.objects.size());
    for (const auto &o : res_.objects) {
      if (o.display_end >= 0) {
        res_.e2e_delays.push_back(to_ms(o.display_end - o.appear));
      } else {
        ++res_.unresolved_objects;
      }
    }
    Ticks fetch = 0, infer = 0, disp = 0;
    for (const auto &c : res_.cycles) {
      if (c.end < 0) continue;
      fetch += c.e_fetch;
      infer += c.infer;
      disp += c.disp;
    }
    if (res_.end_time > 0) {
      const double total = static_cast<double>(res_.end_time);
      res_.per_stage_busy = {static_cast<double>(fetch) / total,
                             static_cast<double>(infer) / total,
                             static_cast<double>(disp) / total};
    }
  }

  const SimConfig &cfg_;
  PipelineVariant variant_;
  Rng camera_rng_;
  Rng stage_rng_;
  Rng object_rng_;
  DelayDist fetch_dist_;
  DelayDist infer_dist_;
  DelayDist disp_dist_;

  Millis cycle_ms_ = 0.0;
  Ticks microframe_ = 0;
  Ticks urb_ = 0;
  Ticks data_ticks_ = 0;
  Ticks jitter_ = 0;
  Ticks min_capture_ = 0;
  Ticks phase_ = 0;
  Ticks duration_ = 0;
  Ticks theta_ = 0;
  Ticks hard_stop_ = 0;

  std::priority_queue<Event, std::vector<Event>, EventLater> events_;
  std::uint64_t seq_ = 0;
  Ticks now_ = 0;

  std::deque<std::int64_t> queue_;
  bool armed_ = false;
  std::int64_t on_demand_frame_ = -1;
  bool fetch_waiting_ = false;
  bool saw_drop_ = false;

  std::int64_t cycle_ = 0;
  int pending_ = 0;
  std::int64_t to_infer_ = -1;
  std::int64_t to_display_ = -1;

  std::size_t next_object_ = 0;
  std::size_t resolved_ = 0;

  SimResult res_;
};

}  // namespace

SimResult run(const SimConfig &cfg) {
  cfg.validate();
  return Simulation(cfg).run();
}

std::string format_trace(const std::vector<TraceEvent> &trace) {
  std::ostringstream out;
  for (const auto &e : trace)
    out << e.time << '\t' << to_string(e.type) << '\t' << e.frame << '\t' << e.detail << '\n';
  return out.str();
}

}  // namespace odlat
