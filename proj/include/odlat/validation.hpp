#ifndef ODLAT_VALIDATION_HPP_
#define ODLAT_VALIDATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "odlat/analyzer.hpp"
#include "odlat/simulator.hpp"

namespace odlat {

// Slack allowed when comparing a simulated delay to a bound.
inline constexpr Millis kBoundTolerance = 1e-5;

struct BoundCheck {
  std::string component;  // transfer, camera, queue, detector, blocking, e2e
  Millis lo = 0.0;
  Millis hi = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  Millis observed_min = 0.0;
  Millis observed_max = 0.0;
  // Distance from the observed extremes to the bounds (negative = violated).
  Millis margin_low() const { return samples ? observed_min - lo : 0.0; }
  Millis margin_high() const { return samples ? hi - observed_max : 0.0; }
};

struct Violation {
  std::string component;
  std::int64_t index;  // frame, cycle or object index
  Millis value;
  Millis lo;
  Millis hi;
};

struct ValidationReport {
  std::vector<BoundCheck> checks;
  std::vector<Violation> violations;  // first few only
  std::size_t violation_count = 0;
  // Samples dropped as part of the queue fill-up transient.
  std::size_t transient_samples = 0;

  bool ok() const { return violation_count == 0; }
};

// Checks every simulated delay component against the analytical bounds.
// shrink > 0 tightens both ends of every bound (negative control).
ValidationReport validate_against_analysis(const SimResult &sim, const E2EBounds &bounds,
                                           Millis shrink = 0.0);

struct RunStats {
  std::size_t objects = 0;  // steady-state objects used for the e2e figures
  Millis mean_e2e = 0.0;
  Millis p50_e2e = 0.0;
  Millis p99_e2e = 0.0;
  Millis max_e2e = 0.0;
  Millis mean_cycle = 0.0;
  Millis mean_queue = 0.0;
  std::size_t frames = 0;
  std::size_t drops = 0;
};

// True when the sample belongs to the steady state of the run.
bool in_steady_state(const SimResult &sim, const FrameRecord &frame);

// e2e delays of objects captured in the steady state.
std::vector<Millis> steady_e2e(const SimResult &sim);

RunStats run_stats(const SimResult &sim);

}  // namespace odlat

#endif  // ODLAT_VALIDATION_HPP_
