#ifndef ODLAT_SIMULATOR_HPP_
#define ODLAT_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odlat/camera.hpp"
#include "odlat/detector.hpp"
#include "odlat/dist.hpp"

namespace odlat {

// Simulation time in nanoseconds.
using Ticks = std::int64_t;
inline constexpr Ticks kTicksPerMs = 1'000'000;

Ticks to_ticks(Millis ms);
inline Millis to_ms(Ticks t) { return static_cast<double>(t) / static_cast<double>(kTicksPerMs); }

struct ObjectInjection {
  enum class Kind { kUniform, kExplicit };
  Kind kind = Kind::kUniform;
  std::size_t count = 1000;   // uniform: number of objects
  Millis warmup = 0.0;        // uniform: appearances drawn from [warmup, duration)
  std::vector<Millis> times;  // explicit appearance instants
};

struct SimConfig {
  CameraConfig camera;
  UsbLinkConfig usb;
  StageProfile profile;
  PipelineVariant variant = PipelineVariant::vanilla(4);
  Millis duration = 60'000.0;
  std::uint64_t seed = 1;
  ObjectInjection objects;
  // Offset of the USB microframe/URB grid relative to the first capture, in
  // [0, M*U). Drawn from the seed when unset.
  std::optional<Millis> urb_phase;
  bool record_trace = false;

  void validate() const;
};

enum class FrameFate : std::uint8_t { kInTransit, kDropped, kQueued, kFetched };

struct FrameRecord {
  Ticks capture = 0;
  Ticks decision = 0;  // queuing decision point
  Ticks arrival = 0;   // last byte in the driver buffer
  Ticks dequeue = -1;  // handed to the fetch stage
  Ticks fetch_end = -1;
  Ticks infer_start = -1;
  Ticks infer_end = -1;
  Ticks display_start = -1;
  Ticks display_end = -1;
  FrameFate fate = FrameFate::kInTransit;
  bool arrived = false;
  std::int64_t fetch_cycle = -1;
  // Objects first captured by this frame: [object_begin, object_end).
  std::size_t object_begin = 0;
  std::size_t object_end = 0;
};

struct CycleRecord {
  Ticks start = 0;
  Ticks end = -1;
  Ticks fetch_release = -1;
  Ticks fetch_end = -1;
  Ticks b_fetch = 0;
  Ticks e_fetch = 0;
  Ticks infer = 0;
  Ticks disp = 0;
  std::int64_t fetched_frame = -1;
  std::int64_t inferred_frame = -1;
  std::int64_t displayed_frame = -1;
};

struct ObjectRecord {
  Ticks appear = 0;
  std::int64_t frame = -1;
  Ticks display_end = -1;
};

enum class EventType : std::uint8_t {
  kCapture,
  kDecision,
  kEnqueue,
  kDrop,
  kArrival,
  kFetchRelease,
  kFetchStart,
  kFetchEnd,
  kInferStart,
  kInferEnd,
  kDisplayStart,
  kDisplayEnd,
  kJoin,
};

std::string to_string(EventType t);

struct TraceEvent {
  Ticks time;
  EventType type;
  std::int64_t frame;   // -1 when not tied to a frame
  std::int64_t detail;  // cycle index, or queue depth for enqueue/drop
};

struct StageUtilization {
  double fetch = 0.0;
  double infer = 0.0;
  double disp = 0.0;
};

struct SimResult {
  // One entry per injected object, in appearance order.
  std::vector<Millis> e2e_delays;
  std::vector<Millis> cycle_times;
  // One entry per fetched frame.
  std::vector<Millis> queue_delays;
  std::size_t drops = 0;
  std::vector<std::pair<Millis, int>> occupancy_trace;
  StageUtilization per_stage_busy;

  std::vector<FrameRecord> frames;
  std::vector<CycleRecord> cycles;
  std::vector<ObjectRecord> objects;
  std::vector<TraceEvent> trace;

  // First instant the queue was full (vanilla), 0 otherwise. Samples that
  // start earlier belong to the fill-up transient.
  Ticks steady_state_start = 0;
  Ticks end_time = 0;
  std::size_t unresolved_objects = 0;
  // Requested appearances at or after the end of the run; not injected.
  std::size_t late_objects = 0;

  std::size_t captured() const { return frames.size(); }
  std::size_t count(FrameFate fate) const;
};

SimResult run(const SimConfig &cfg);

// Tab-separated event dump: time_ns, event, frame_id, detail.
std::string format_trace(const std::vector<TraceEvent> &trace);

}  // namespace odlat

#endif  // ODLAT_SIMULATOR_HPP_
