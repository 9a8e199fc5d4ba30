#include "odlat/presets.hpp"

namespace odlat {

namespace {

// Stage shapes are calibration choices: contended inference around 163 ms
// for the 608 input, lighter networks scaled down.
constexpr std::string_view kXavier = R"(
[scenario]
name = xavier-yolov3-calibrated
profile_key = 608

[camera]
preset = c930e-640x480-30

[stages]
fetch = 5:0.2, 6:0.5, 7:0.2, 8:0.1
infer_cpu = 4:0.5, 5:0.5
disp_exec = 2:0.5, 3:0.5
disp_block = 0:0.5, 1:0.5
inflation_infer = 28

[stages.608]
infer_gpu = 128:0.1, 129:0.15, 130:0.25, 131:0.25, 132:0.15, 133:0.1

[stages.416]
infer_gpu = 60:0.2, 61:0.3, 62:0.3, 63:0.2
inflation_infer = 14

[stages.320]
infer_gpu = 34:0.25, 35:0.5, 36:0.25
inflation_infer = 8

[variants]
list = vanilla(4), on_demand, zero_slack(auto), contention_free
queue_size = 4

[simulation]
duration = 60000
seed = 1
objects = 2000
warmup = 2000
)";

constexpr std::string_view kDefault = R"(
[scenario]
base = xavier-yolov3-calibrated
name = default-640x480-30

[camera]
preset = c930e-640x480-30

[variants]
list = vanilla(4)
)";

constexpr std::string_view kCase1 = R"(
[scenario]
name = case1-fast-detector

[camera]
preset = c930e-640x480-20

[stages]
fetch = 5:0.3, 6:0.4, 8:0.3
infer_cpu = 2
infer_gpu = 20:0.25, 22:0.5, 25:0.25
disp_exec = 3:0.5, 5:0.5
inflation_infer = 5

[variants]
list = vanilla(4), on_demand

[simulation]
duration = 60000
seed = 1
objects = 2000
warmup = 1000
)";

constexpr std::string_view kCase3 = R"(
[scenario]
name = case3-balanced

[camera]
preset = c930e-640x480-30

[stages]
fetch = 27:0.3, 30:0.4, 34:0.3
infer_cpu = 2
infer_gpu = 18:0.25, 22:0.5, 26:0.25
inflation_infer = 10
disp_exec = 26:0.3, 30:0.4, 35:0.3

[variants]
list = vanilla(4), on_demand, zero_slack(auto), contention_free

[simulation]
duration = 60000
seed = 1
objects = 2000
warmup = 1000
)";

}  // namespace

const std::vector<ScenarioPreset> &scenario_presets() {
  static const std::vector<ScenarioPreset> presets = {
      {"xavier-yolov3-calibrated", "inference-dominated pipeline, cycle about 163 ms", kXavier},
      {"default-640x480-30", "640x480 at 30 fps, Q=4, 608 network input", kDefault},
      {"case1-fast-detector", "detector faster than the camera; queue stays empty", kCase1},
      {"case3-balanced", "balanced stages near the camera period", kCase3},
  };
  return presets;
}

std::optional<ScenarioPreset> find_scenario_preset(std::string_view name) {
  for (const auto &p : scenario_presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace odlat
