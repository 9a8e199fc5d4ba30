#ifndef ODLAT_DETECTOR_HPP_
#define ODLAT_DETECTOR_HPP_

#include <string>

#include "odlat/camera.hpp"
#include "odlat/dist.hpp"

namespace odlat {

// Extra execution time a stage suffers while another stage runs beside it
// (shared memory bandwidth contention). All values are >= 0.
struct ContentionInflation {
  DelayDist fetch = DelayDist::constant(0.0);
  DelayDist infer = DelayDist::constant(28.0);
  DelayDist disp = DelayDist::constant(0.0);
};

// Profiled execution-time distributions of the three detector stages.
// infer_cpu/infer_gpu and the exec times are measured without contention.
struct StageProfile {
  DelayDist fetch_exec = DelayDist::constant(0.0);
  DelayDist infer_cpu = DelayDist::constant(0.0);
  DelayDist infer_gpu = DelayDist::constant(0.0);
  DelayDist disp_exec = DelayDist::constant(0.0);
  DelayDist disp_block = DelayDist::constant(0.0);
  ContentionInflation inflation;

  void validate() const;
};

class PipelineVariant {
 public:
  enum class Kind { kVanilla, kOnDemand, kZeroSlack, kContentionFree };

  // Q = 0 degenerates to on-demand capture.
  static PipelineVariant vanilla(int queue_size);
  static PipelineVariant on_demand() { return PipelineVariant(Kind::kOnDemand, 0, 0.0); }
  static PipelineVariant zero_slack(Millis theta_fetch);
  static PipelineVariant contention_free() {
    return PipelineVariant(Kind::kContentionFree, 0, 0.0);
  }

  Kind kind() const { return kind_; }
  int queue_size() const { return queue_size_; }
  Millis theta_fetch() const { return theta_; }

  bool uses_queue() const { return kind_ == Kind::kVanilla; }
  // Stages other than inference run concurrently with inference.
  bool inference_contended() const { return kind_ != Kind::kContentionFree; }

  std::string name() const;  // e.g. "vanilla(Q=4)", "zero_slack(theta=85.79)"
  std::string key() const;   // file-name friendly: "vanilla_q4", "zero_slack", ...

  friend bool operator==(const PipelineVariant &, const PipelineVariant &) = default;

 private:
  PipelineVariant(Kind kind, int q, Millis theta) : kind_(kind), queue_size_(q), theta_(theta) {}

  Kind kind_;
  int queue_size_;
  Millis theta_;
};

struct BlockingBounds {
  Millis b_fetch_min;
  Millis b_fetch_max;
};

struct ServiceDistribution {
  DelayDist dist;
  // The fetch stage alone outlasts every other stage (theta too large).
  bool fetch_dominates = false;
};

struct DetectorDelayBounds {
  DelayDist s_dist;
  Millis s_min;
  Millis s_max;
  Millis d_detector_min;
  Millis d_detector_max;
  Millis b_fetch_min;
  Millis b_fetch_max;
  // A bound went negative and was clamped to zero.
  bool clamped = false;
};

// Stage delay distributions as each pipeline sees them.
DelayDist fetch_exec_dist(const StageProfile &p, bool contended);
DelayDist infer_delay_dist(const StageProfile &p, bool contended);
DelayDist display_delay_dist(const StageProfile &p, bool contended);

// Fetch delay e_fetch + b_fetch (+ theta for the zero-slack pipeline).
DelayDist fetch_delay_dist(const StageProfile &p, const PipelineVariant &variant,
                           const DelayDist &b_fetch);

// Object detection service interval (cycle time) distribution.
ServiceDistribution service_distribution(const StageProfile &p, const PipelineVariant &variant,
                                         const DelayDist &b_fetch);

BlockingBounds blocking_bounds(const CameraConfig &cam, const UsbLinkConfig &usb,
                               std::uint64_t frame_bytes);

// Closed-form bounds for a given service distribution.
DetectorDelayBounds detector_delay_bounds(const DelayDist &s_dist, const DelayDist &d_disp,
                                          const PipelineVariant &variant,
                                          const BlockingBounds &blocking);

// Same, building the service distribution from the profile. b_fetch is the
// blocking-time distribution fed into the fetch stage.
DetectorDelayBounds detector_delay_bounds(const StageProfile &p, const PipelineVariant &variant,
                                          const BlockingBounds &blocking,
                                          const DelayDist &b_fetch);

Millis compute_theta_fetch(Millis s_min, Millis e_fetch_max, Millis b_fetch_max);
Millis compute_theta_fetch(const StageProfile &p, Millis s_min, Millis b_fetch_max);

}  // namespace odlat

#endif  // ODLAT_DETECTOR_HPP_
