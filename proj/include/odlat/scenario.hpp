#ifndef ODLAT_SCENARIO_HPP_
#define ODLAT_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odlat/analyzer.hpp"
#include "odlat/simulator.hpp"

namespace odlat {

// Raised for malformed scenario text; what() carries "origin:line: message".
class ParseError : public Error {
 public:
  using Error::Error;
};

// A variant as written in a scenario; theta unset means "compute it".
struct VariantSpec {
  PipelineVariant::Kind kind = PipelineVariant::Kind::kVanilla;
  int queue_size = 4;
  std::optional<Millis> theta;

  friend bool operator==(const VariantSpec &, const VariantSpec &) = default;
};

struct SimSettings {
  Millis duration = 60'000.0;
  std::uint64_t seed = 1;
  std::size_t objects = 2000;
  Millis warmup = 0.0;
  std::vector<Millis> object_times;  // explicit appearances; overrides objects
  std::optional<Millis> urb_phase;
};

struct Scenario {
  std::string name = "unnamed";
  SystemModel model;
  // Stage profiles by selection key; model.profile holds the active one.
  std::map<std::string, StageProfile> profiles;
  std::string profile_key;
  std::vector<VariantSpec> variants;
  SimSettings sim;

  // Switches model.profile to another keyed profile.
  void select_profile(const std::string &key);
  std::vector<std::string> profile_keys() const;
};

// Parses scenario text. Relative profile file paths resolve against base_dir;
// origin names the text in diagnostics.
Scenario parse_scenario(std::string_view text, const std::filesystem::path &base_dir,
                        const std::string &origin);
Scenario load_scenario_file(const std::filesystem::path &path);
// Built-in scenario by name.
Scenario load_preset(std::string_view name);

PipelineVariant resolve_variant(const Scenario &s, const VariantSpec &spec);
std::vector<PipelineVariant> resolve_variants(const Scenario &s);

// Variant list entry such as "vanilla(4)", "zero_slack(auto)" or "on_demand".
VariantSpec parse_variant_spec(std::string_view text, int default_queue,
                               std::optional<Millis> default_theta);

SimConfig make_sim_config(const Scenario &s, const PipelineVariant &variant);

}  // namespace odlat

#endif  // ODLAT_SCENARIO_HPP_
