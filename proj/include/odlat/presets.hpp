#ifndef ODLAT_PRESETS_HPP_
#define ODLAT_PRESETS_HPP_

#include <optional>
#include <string_view>
#include <vector>

namespace odlat {

struct ScenarioPreset {
  std::string_view name;
  std::string_view summary;
  std::string_view text;  // scenario file contents
};

const std::vector<ScenarioPreset> &scenario_presets();
std::optional<ScenarioPreset> find_scenario_preset(std::string_view name);

}  // namespace odlat

#endif  // ODLAT_PRESETS_HPP_
