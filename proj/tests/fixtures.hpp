#ifndef ODLAT_TESTS_FIXTURES_HPP_
#define ODLAT_TESTS_FIXTURES_HPP_

#include "odlat/analyzer.hpp"
#include "odlat/simulator.hpp"

namespace fixture {

// C = 10 ms, one-byte frames over a one-byte-per-microframe link with
// single-microframe URBs, constant stages: fetch 2, infer 8, display 1.
inline odlat::SimConfig micro() {
  odlat::SimConfig c;
  c.camera.frame_rate = 100;
  c.camera.width = 1;
  c.camera.height = 1;
  c.camera.bits_per_pixel = 8;
  c.usb.bytes_per_microframe = 1;
  c.usb.urb_microframes = 1;
  c.profile.fetch_exec = odlat::DelayDist::constant(2);
  c.profile.infer_cpu = odlat::DelayDist::constant(8);
  c.profile.disp_exec = odlat::DelayDist::constant(1);
  c.profile.inflation.infer = odlat::DelayDist::constant(0);
  c.variant = odlat::PipelineVariant::vanilla(1);
  c.duration = 30;
  c.urb_phase = 0.0;
  c.objects.kind = odlat::ObjectInjection::Kind::kExplicit;
  c.objects.times = {0.0};
  return c;
}

inline odlat::SystemModel model_of(const odlat::SimConfig &c) {
  return {c.camera, c.usb, c.profile};
}

// Calibrated inference-dominated system at 640x480, 30 fps.
inline odlat::SystemModel calibrated() {
  odlat::SystemModel m;
  m.usb.bytes_per_microframe = 2688;
  m.profile.fetch_exec = odlat::parse_dist_literal("5:0.2, 6:0.5, 7:0.2, 8:0.1");
  m.profile.infer_cpu = odlat::parse_dist_literal("4:0.5, 5:0.5");
  m.profile.infer_gpu =
      odlat::parse_dist_literal("128:0.1, 129:0.15, 130:0.25, 131:0.25, 132:0.15, 133:0.1");
  m.profile.disp_exec = odlat::parse_dist_literal("2:0.5, 3:0.5");
  m.profile.disp_block = odlat::parse_dist_literal("0:0.5, 1:0.5");
  return m;
}

inline odlat::SimConfig sim_of(const odlat::SystemModel &m, const odlat::PipelineVariant &v,
                               double duration = 60000, std::uint64_t seed = 1) {
  odlat::SimConfig c;
  c.camera = m.camera;
  c.usb = m.usb;
  c.profile = m.profile;
  c.variant = v;
  c.duration = duration;
  c.seed = seed;
  c.objects.count = 2000;
  c.objects.warmup = 1000;
  return c;
}

}  // namespace fixture

#endif  // ODLAT_TESTS_FIXTURES_HPP_
