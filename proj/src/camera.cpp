#include "odlat/camera.hpp"

#include <cmath>
#include <limits>

namespace odlat {

namespace {

// ceil() that ignores floating-point noise just above an integer.
double ceil_tolerant(double x) { return std::ceil(x - 1e-9); }
double floor_tolerant(double x) { return std::floor(x + 1e-9); }

}  // namespace

void CameraConfig::validate() const {
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) throw Error("camera frame_rate must be > 0");
  if (width <= 0 || height <= 0) throw Error("camera resolution must be positive");
  if (bits_per_pixel <= 0) throw Error("camera bits_per_pixel must be positive");
  if (capture_jitter < 0.0 || capture_jitter >= cycle_time() / 2)
    throw Error("camera capture_jitter must lie in [0, C/2)");
  if (min_capture_delay < 0.0) throw Error("camera min_capture_delay must be >= 0");
}

void UsbLinkConfig::validate() const {
  if (bytes_per_microframe <= 0) throw Error("usb bytes_per_microframe must be positive");
  if (urb_microframes < 1) throw Error("usb urb_microframes must be >= 1");
  if (!(microframe_len > 0.0)) throw Error("usb microframe_len must be positive");
  if (protocol_microframes < 0) throw Error("usb protocol_microframes must be >= 0");
}

std::uint64_t frame_size(const CameraConfig &cam) {
  cam.validate();
  const auto x = static_cast<std::uint64_t>(cam.width);
  const auto y = static_cast<std::uint64_t>(cam.height);
  const auto p = static_cast<std::uint64_t>(cam.bits_per_pixel);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (x > kMax / y || x * y > kMax / p) throw Error("frame size overflows 64-bit byte count");
  const std::uint64_t bits = x * y * p;
  return bits / 8 + (bits % 8 != 0 ? 1 : 0);
}

std::int64_t transfer_microframes(std::uint64_t frame_bytes, const UsbLinkConfig &usb) {
  usb.validate();
  const auto b = static_cast<std::uint64_t>(usb.bytes_per_microframe);
  const auto data = frame_bytes / b + (frame_bytes % b != 0 ? 1 : 0);
  return static_cast<std::int64_t>(data) + usb.protocol_microframes;
}

TransferBounds transfer_delay_bounds(std::uint64_t frame_bytes, const UsbLinkConfig &usb) {
  if (frame_bytes == 0) throw Error("transfer_delay_bounds: frame size must be positive");
  const Millis min =
      static_cast<double>(transfer_microframes(frame_bytes, usb)) * usb.microframe_len;
  return {min, min + usb.urb_period()};
}

DelayDist arrival_distribution(const CameraConfig &cam, const UsbLinkConfig &usb) {
  cam.validate();
  usb.validate();
  const Millis c = cam.cycle_time();
  const Millis mu = usb.urb_period();
  const Millis a_min = floor_tolerant(c / mu) * mu;
  const Millis a_max = ceil_tolerant(c / mu) * mu;
  if (a_max - a_min <= kValueTolerance) return DelayDist::constant(a_min);
  // p1 * a_min + p2 * a_max = C with p1 + p2 = 1.
  const double p2 = (c - a_min) / (a_max - a_min);
  return DelayDist({{a_min, 1.0 - p2}, {a_max, p2}});
}

Millis capture_delay_max(Millis s_max, const CameraConfig &cam, const UsbLinkConfig &usb) {
  if (!(s_max > 0.0)) throw Error("capture_delay_max: s_max must be positive");
  const Millis c = cam.cycle_time();
  return ceil_tolerant((s_max + usb.urb_period()) / c) * c;
}

CameraDelayBounds camera_delay_bounds(const CameraConfig &cam, const UsbLinkConfig &usb,
                                      Millis s_max) {
  const std::uint64_t bytes = frame_size(cam);
  const TransferBounds tran = transfer_delay_bounds(bytes, usb);
  const Millis capt = capture_delay_max(s_max, cam, usb);
  CameraDelayBounds b{};
  b.frame_size = bytes;
  b.d_tran_min = tran.min;
  b.d_tran_max = tran.max_exclusive;
  b.d_capt_max = capt;
  b.d_camera_min = tran.min + cam.min_capture_delay;
  b.d_camera_max = capt + tran.max_exclusive + cam.min_capture_delay;
  return b;
}

const std::vector<CameraPreset> &camera_presets() {
  static const std::vector<CameraPreset> presets = [] {
    auto row = [](std::string name, double fps, int w, int h, std::int64_t bytes) {
      CameraPreset p;
      p.name = std::move(name);
      p.camera.frame_rate = fps;
      p.camera.width = w;
      p.camera.height = h;
      p.camera.bits_per_pixel = 16;
      p.usb.bytes_per_microframe = bytes;
      p.usb.urb_microframes = 32;
      p.usb.microframe_len = 0.125;
      return p;
    };
    return std::vector<CameraPreset>{
        row("c930e-320x240-20", 20.0, 320, 240, 512),
        row("c930e-320x240-30", 30.0, 320, 240, 800),
        row("c930e-640x480-20", 20.0, 640, 480, 1984),
        row("c930e-640x480-30", 30.0, 640, 480, 2688),
    };
  }();
  return presets;
}

std::optional<CameraPreset> find_camera_preset(std::string_view name) {
  for (const auto &p : camera_presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace odlat
