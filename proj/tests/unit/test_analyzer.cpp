#include "doctest.h"
#include "fixtures.hpp"
#include "odlat/validation.hpp"

using namespace odlat;

TEST_CASE("micro-scenario bounds") {
  const SimConfig c = fixture::micro();
  const E2EBounds b = analyze(fixture::model_of(c), c.variant);
  CHECK(b.queue_case == QueueCase::kCase1);
  CHECK_FALSE(b.blocking_free);
  CHECK(b.camera.d_camera_min == doctest::Approx(0.375));
  CHECK(b.camera.d_camera_max == doctest::Approx(20.5));
  CHECK(b.queue.d_queue_max == 0.0);
  CHECK(b.detector.s_min == doctest::Approx(8));
  CHECK(b.detector.s_max == doctest::Approx(12.5));
  CHECK(b.detector.d_detector_min == doctest::Approx(6.5));
  CHECK(b.detector.d_detector_max == doctest::Approx(26));
  CHECK(b.total_min == doctest::Approx(6.875));
  CHECK(b.total_max == doctest::Approx(46.5));
  CHECK(b.total_min == doctest::Approx(b.camera.d_camera_min + b.queue.d_queue_min +
                                       b.detector.d_detector_min));
}

TEST_CASE("calibrated system: component bounds") {
  const SystemModel m = fixture::calibrated();
  const E2EBounds v = analyze(m, PipelineVariant::vanilla(4));
  CHECK(v.queue_case == QueueCase::kCase2);
  CHECK(v.blocking_free);
  CHECK(v.detector.s_min == doctest::Approx(160));
  CHECK(v.detector.s_max == doctest::Approx(166));
  CHECK(v.camera.d_camera_max == doctest::Approx(200 + 32.875));
  CHECK(v.queue.d_queue_max == doctest::Approx(4 * 166 - 24.875));
  CHECK(v.queue.d_queue_min == doctest::Approx(4 * 160 - 32.875 - 100.0 / 3));
  CHECK(safe_theta(m) == doctest::Approx(160 - 8 - 32.875 - 100.0 / 3));
}

TEST_CASE("vanilla and on-demand differ by the queue and blocking terms") {
  const SystemModel m = fixture::calibrated();
  const E2EBounds v = analyze(m, PipelineVariant::vanilla(4));
  const E2EBounds od = analyze(m, PipelineVariant::on_demand());
  REQUIRE(v.detector.s_dist.approx_equal(od.detector.s_dist));
  CHECK(v.total_max - od.total_max ==
        doctest::Approx(v.queue.d_queue_max + od.detector.b_fetch_min));
  CHECK(v.total_min - od.total_min ==
        doctest::Approx(v.queue.d_queue_min + od.detector.b_fetch_max));
}

TEST_CASE("vanilla with Q = 0 is on-demand") {
  const SystemModel m = fixture::calibrated();
  const E2EBounds a = analyze(m, PipelineVariant::vanilla(0));
  const E2EBounds b = analyze(m, PipelineVariant::on_demand());
  CHECK(a.total_min == b.total_min);
  CHECK(a.total_max == b.total_max);
  CHECK(a.variant == b.variant);
}

TEST_CASE("zero-slack shifts the on-demand bounds by theta") {
  const SystemModel m = fixture::calibrated();
  const double theta = safe_theta(m);
  const E2EBounds od = analyze(m, PipelineVariant::on_demand());
  const E2EBounds zs = analyze(m, PipelineVariant::zero_slack(theta));
  CHECK(zs.total_min == doctest::Approx(od.total_min - theta));
  CHECK(zs.total_max == doctest::Approx(od.total_max - theta));
  CHECK(od.total_max >= zs.total_max);
  CHECK(analyze(m, PipelineVariant::vanilla(4)).total_max >= od.total_max);

  // Constant stages: the reduction is exactly theta.
  SystemModel k = m;
  k.profile.fetch_exec = DelayDist::constant(6);
  k.profile.infer_cpu = DelayDist::constant(5);
  k.profile.infer_gpu = DelayDist::constant(130);
  k.profile.disp_exec = DelayDist::constant(3);
  k.profile.disp_block = DelayDist::constant(0);
  const double t = safe_theta(k);
  CHECK(t > 0);
  CHECK(analyze(k, PipelineVariant::on_demand()).total_max -
            analyze(k, PipelineVariant::zero_slack(t)).total_max ==
        doctest::Approx(t));
}

TEST_CASE("balanced stages leave no safe offset") {
  SystemModel m;
  m.usb.bytes_per_microframe = 2688;
  m.profile.fetch_exec = parse_dist_literal("27:0.3, 30:0.4, 34:0.3");
  m.profile.infer_cpu = DelayDist::constant(2);
  m.profile.infer_gpu = parse_dist_literal("18:0.25, 22:0.5, 26:0.25");
  m.profile.inflation.infer = DelayDist::constant(10);
  m.profile.disp_exec = parse_dist_literal("26:0.3, 30:0.4, 35:0.3");
  CHECK(safe_theta(m) == 0.0);
  const E2EBounds od = analyze(m, PipelineVariant::on_demand());
  const E2EBounds zs = analyze(m, PipelineVariant::zero_slack(safe_theta(m)));
  CHECK(od.total_max == zs.total_max);
}

TEST_CASE("simulated means fall inside the bounds") {
  const SystemModel m = fixture::calibrated();
  CompareOptions opt;
  opt.duration = 30000;
  opt.objects = 1000;
  for (const auto &row : compare_variants(m, opt)) {
    CHECK(row.mean_e2e >= row.bounds.total_min);
    CHECK(row.mean_e2e <= row.bounds.total_max);
  }
}

TEST_CASE("staged variants") {
  const SystemModel m = fixture::calibrated();
  CompareOptions opt;
  auto vs = staged_variants(m, opt);
  REQUIRE(vs.size() == 4);
  CHECK(vs[0] == PipelineVariant::vanilla(4));
  CHECK(vs[2].theta_fetch() == doctest::Approx(safe_theta(m)));
  opt.queue_size = 0;
  opt.theta = 12.0;
  vs = staged_variants(m, opt);
  REQUIRE(vs.size() == 3);
  CHECK(vs[1].theta_fetch() == 12.0);
}
