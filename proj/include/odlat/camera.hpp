#ifndef ODLAT_CAMERA_HPP_
#define ODLAT_CAMERA_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odlat/dist.hpp"

namespace odlat {

struct CameraConfig {
  double frame_rate = 30.0;  // frames per second
  int width = 640;
  int height = 480;
  int bits_per_pixel = 16;
  // Uniform +/- jitter on capture instants (simulation only; bounds assume 0).
  Millis capture_jitter = 0.0;
  // Shortest time an object must be visible before a capture records it.
  Millis min_capture_delay = 0.0;

  Millis cycle_time() const { return 1000.0 / frame_rate; }
  void validate() const;
};

struct UsbLinkConfig {
  std::int64_t bytes_per_microframe = 2688;
  int urb_microframes = 32;
  Millis microframe_len = 0.125;
  // Extra microframes of protocol overhead per frame.
  int protocol_microframes = 2;

  Millis urb_period() const { return urb_microframes * microframe_len; }
  void validate() const;
};

struct TransferBounds {
  Millis min;
  Millis max_exclusive;
};

struct CameraDelayBounds {
  std::uint64_t frame_size;  // bytes
  Millis d_tran_min;
  Millis d_tran_max;  // exclusive
  Millis d_capt_max;  // exclusive
  Millis d_camera_min;
  Millis d_camera_max;
};

// Bytes per uncompressed frame, X * Y * P / 8 rounded up.
std::uint64_t frame_size(const CameraConfig &cam);

// Microframes needed for one frame including protocol overhead.
std::int64_t transfer_microframes(std::uint64_t frame_bytes, const UsbLinkConfig &usb);

TransferBounds transfer_delay_bounds(std::uint64_t frame_bytes, const UsbLinkConfig &usb);

// Arrival intervals at the queue, quantized to the URB buffering period.
DelayDist arrival_distribution(const CameraConfig &cam, const UsbLinkConfig &usb);

// Exclusive upper bound on the capture delay given the longest service interval.
Millis capture_delay_max(Millis s_max, const CameraConfig &cam, const UsbLinkConfig &usb);

CameraDelayBounds camera_delay_bounds(const CameraConfig &cam, const UsbLinkConfig &usb,
                                      Millis s_max);

struct CameraPreset {
  std::string name;
  CameraConfig camera;
  UsbLinkConfig usb;
};

// Measured USB reservations of a Logitech C930e in YUYV mode.
const std::vector<CameraPreset> &camera_presets();
std::optional<CameraPreset> find_camera_preset(std::string_view name);

}  // namespace odlat

#endif  // ODLAT_CAMERA_HPP_
