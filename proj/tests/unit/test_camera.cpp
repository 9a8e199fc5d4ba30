#include <cmath>

#include "doctest.h"
#include "odlat/camera.hpp"

using namespace odlat;

namespace {

CameraConfig cam(double fps, int w, int h, int bpp = 16) {
  CameraConfig c;
  c.frame_rate = fps;
  c.width = w;
  c.height = h;
  c.bits_per_pixel = bpp;
  return c;
}

UsbLinkConfig usb(std::int64_t b, int m = 32, double u = 0.125) {
  UsbLinkConfig l;
  l.bytes_per_microframe = b;
  l.urb_microframes = m;
  l.microframe_len = u;
  return l;
}

}  // namespace

TEST_CASE("frame size") {
  CHECK(frame_size(cam(30, 640, 480)) == 614400);
  CHECK(frame_size(cam(30, 320, 240)) == 153600);
  CHECK(frame_size(cam(30, 1, 1, 8)) == 1);
  CHECK(frame_size(cam(30, 1, 1, 12)) == 2);
  CHECK_THROWS_AS(frame_size(cam(30, 2'000'000'000, 2'000'000'000, 2'000'000'000)), Error);
  CHECK_THROWS_AS(frame_size(cam(30, 0, 480)), Error);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(cam(0, 640, 480).validate(), Error);
  CHECK_THROWS_AS(usb(0).validate(), Error);
  CHECK_THROWS_AS(usb(512, 0).validate(), Error);
  CameraConfig c = cam(30, 640, 480);
  CHECK(c.cycle_time() * c.frame_rate == doctest::Approx(1000.0).epsilon(1e-12));
  c.capture_jitter = 20;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("transfer delay bounds") {
  TransferBounds t = transfer_delay_bounds(614400, usb(2688));
  CHECK(t.min == doctest::Approx(28.875));
  CHECK(t.max_exclusive == doctest::Approx(32.875));
  t = transfer_delay_bounds(153600, usb(800));
  CHECK(t.min == doctest::Approx(24.25));
  CHECK(t.max_exclusive == doctest::Approx(28.25));
  t = transfer_delay_bounds(512, usb(512));
  CHECK(t.min == doctest::Approx(3 * 0.125));
  UsbLinkConfig custom = usb(512);
  custom.protocol_microframes = 0;
  CHECK(transfer_delay_bounds(512, custom).min == doctest::Approx(0.125));
}

TEST_CASE("arrival distribution") {
  DelayDist a = arrival_distribution(cam(30, 640, 480), usb(2688));
  REQUIRE(a.size() == 2);
  CHECK(a.points()[0].value == doctest::Approx(32));
  CHECK(a.points()[0].prob == doctest::Approx(2.0 / 3).epsilon(1e-9));
  CHECK(a.points()[1].value == doctest::Approx(36));
  CHECK(a.points()[1].prob == doctest::Approx(1.0 / 3).epsilon(1e-9));

  a = arrival_distribution(cam(20, 640, 480), usb(1984));
  REQUIRE(a.size() == 2);
  CHECK(a.points()[0].value == doctest::Approx(48));
  CHECK(a.points()[0].prob == doctest::Approx(0.5));
  CHECK(a.points()[1].value == doctest::Approx(52));

  a = arrival_distribution(cam(31.25, 640, 480), usb(2688));
  REQUIRE(a.size() == 1);
  CHECK(a.min() == doctest::Approx(32));

  for (double fps : {7.0, 12.5, 15.0, 24.0, 29.97, 30.0, 60.0, 90.0}) {
    const CameraConfig c = cam(fps, 320, 240);
    const UsbLinkConfig l = usb(512);
    const DelayDist d = arrival_distribution(c, l);
    CHECK(d.mean() == doctest::Approx(c.cycle_time()).epsilon(1e-9));
    for (const auto &p : d.points()) {
      const double k = p.value / l.urb_period();
      CHECK(std::abs(k - std::round(k)) < 1e-9);
    }
  }
}

TEST_CASE("capture delay bound") {
  const CameraConfig c30 = cam(30, 640, 480);
  CHECK(capture_delay_max(163, c30, usb(2688)) == doctest::Approx(200));
  CHECK(capture_delay_max(1e-6, c30, usb(2688, 1, 1e-9)) == doctest::Approx(c30.cycle_time()));
  CHECK(capture_delay_max(100, cam(20, 640, 480), usb(1984)) == doctest::Approx(150));
  CHECK_THROWS_AS(capture_delay_max(0, c30, usb(2688)), Error);
}

TEST_CASE("camera delay bounds") {
  CameraDelayBounds b = camera_delay_bounds(cam(30, 640, 480), usb(2688), 163);
  CHECK(b.frame_size == 614400);
  CHECK(b.d_camera_min == doctest::Approx(28.875));
  CHECK(b.d_camera_max == doctest::Approx(232.875));
  CHECK(b.d_capt_max == doctest::Approx(200));

  // One byte per frame with B = 1: I = B.
  CameraConfig tiny = cam(30, 1, 1, 8);
  b = camera_delay_bounds(tiny, usb(1), 1e-6);
  CHECK(b.d_camera_min == doctest::Approx(0.375));
  CHECK(b.d_camera_max == doctest::Approx(tiny.cycle_time() + (3 + 32) * 0.125));

  b = camera_delay_bounds(cam(20, 320, 240), usb(512), 100);
  CHECK(b.d_camera_min == doctest::Approx(37.75));

  // Monotone in s_max, frame size and M.
  double prev = 0;
  for (double s = 10; s < 400; s += 7.3) {
    const double mx = camera_delay_bounds(cam(30, 640, 480), usb(2688), s).d_camera_max;
    CHECK(mx >= prev);
    prev = mx;
  }
  CHECK(camera_delay_bounds(cam(30, 640, 480), usb(2688, 64), 163).d_camera_max >=
        camera_delay_bounds(cam(30, 640, 480), usb(2688, 32), 163).d_camera_max);
  CHECK(camera_delay_bounds(cam(30, 640, 480), usb(2688), 163).d_camera_max >=
        camera_delay_bounds(cam(30, 320, 240), usb(2688), 163).d_camera_max);
}

TEST_CASE("exposure floor widens both camera bounds") {
  CameraConfig c = cam(30, 640, 480);
  c.min_capture_delay = 2.5;
  const CameraDelayBounds b = camera_delay_bounds(c, usb(2688), 163);
  CHECK(b.d_camera_min == doctest::Approx(28.875 + 2.5));
  CHECK(b.d_camera_max == doctest::Approx(232.875 + 2.5));
}

TEST_CASE("camera presets") {
  const auto p = find_camera_preset("c930e-320x240-20");
  REQUIRE(p);
  CHECK(p->usb.bytes_per_microframe == 512);
  CHECK(p->camera.frame_rate == 20);
  CHECK(find_camera_preset("c930e-640x480-30")->usb.bytes_per_microframe == 2688);
  CHECK(find_camera_preset("c930e-640x480-20")->usb.bytes_per_microframe == 1984);
  CHECK(find_camera_preset("c930e-320x240-30")->usb.bytes_per_microframe == 800);
  CHECK_FALSE(find_camera_preset("nope"));
  for (const auto &preset : camera_presets()) CHECK(preset.usb.urb_period() == doctest::Approx(4.0));
}
