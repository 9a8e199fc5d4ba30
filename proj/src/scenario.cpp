#include "odlat/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "odlat/presets.hpp"

namespace odlat {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  std::string origin;
  int line = 0;
  std::filesystem::path base_dir;
};

[[noreturn]] void fail(const Entry &e, const std::string &msg) {
  throw ParseError(e.origin + ":" + std::to_string(e.line) + ": " + msg);
}

[[noreturn]] void fail_at(const std::string &origin, int line, const std::string &msg) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

const std::set<std::string> &known_keys(const std::string &section) {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name", "base", "profile_key"}},
      {"camera",
       {"preset", "frame_rate", "width", "height", "bits_per_pixel", "capture_jitter",
        "min_capture_delay"}},
      {"usb", {"bytes_per_microframe", "urb_microframes", "microframe_len", "protocol_microframes"}},
      {"stages",
       {"fetch", "infer_cpu", "infer_gpu", "disp_exec", "disp_block", "inflation_fetch",
        "inflation_infer", "inflation_disp", "bin_width"}},
      {"variants", {"list", "queue_size", "theta"}},
      {"simulation", {"duration", "seed", "objects", "object_times", "warmup", "urb_phase"}},
  };
  return keys.at(section);
}

std::string section_kind(const std::string &section) {
  return section.rfind("stages.", 0) == 0 ? "stages" : section;
}

std::vector<Entry> tokenize(std::string_view text, const std::filesystem::path &base_dir,
                            const std::string &origin) {
  static const std::set<std::string> sections = {"scenario", "camera",   "usb",
                                                 "stages",   "variants", "simulation"};
  std::vector<Entry> out;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_at(origin, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      const bool keyed = section.rfind("stages.", 0) == 0 && section.size() > 7;
      if (!keyed && !sections.count(section))
        fail_at(origin, line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_at(origin, line, "expected key = value");
    if (section.empty()) fail_at(origin, line, "key outside of any section");
    Entry e{section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), origin, line, base_dir};
    if (e.key.empty()) fail(e, "empty key");
    if (!known_keys(section_kind(section)).count(e.key))
      fail(e, "unknown key '" + e.key + "' in [" + section + "]");
    if (e.value.empty()) fail(e, "missing value for '" + e.key + "'");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Entry> gather(std::string_view text, const std::filesystem::path &base_dir,
                          const std::string &origin, int depth) {
  std::vector<Entry> own = tokenize(text, base_dir, origin);
  const Entry *base = nullptr;
  for (const Entry &e : own)
    if (e.section == "scenario" && e.key == "base") base = &e;
  std::vector<Entry> out;
  if (base) {
    if (depth > 4) fail(*base, "preset 'base' chain is too deep");
    const auto preset = find_scenario_preset(base->value);
    if (!preset) fail(*base, "unknown preset '" + base->value + "'");
    out = gather(preset->text, base_dir, "preset:" + std::string(preset->name), depth + 1);
  }
  // A camera preset applies before the explicit camera/usb keys of the same source.
  std::stable_partition(own.begin(), own.end(), [](const Entry &e) {
    return e.section == "camera" && e.key == "preset";
  });
  for (Entry &e : own)
    if (!(e.section == "scenario" && e.key == "base")) out.push_back(std::move(e));
  return out;
}

template <typename T>
T parse_int(const Entry &e) {
  T v{};
  const char *end = e.value.data() + e.value.size();
  const auto [p, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || p != end) fail(e, "'" + e.key + "' expects an integer, got '" + e.value + "'");
  return v;
}

double parse_number(const Entry &e, const std::string &text) {
  double v = 0.0;
  const char *end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v))
    fail(e, "'" + e.key + "' expects a number, got '" + text + "'");
  return v;
}

double parse_number(const Entry &e) { return parse_number(e, e.value); }

std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

DelayDist resolve_dist(const Entry &e, Millis bin_width) {
  try {
    if (e.value.rfind("file:", 0) == 0) {
      std::filesystem::path p = trim(e.value.substr(5));
      if (p.is_relative()) p = e.base_dir / p;
      return from_samples(load_samples_csv(p), bin_width);
    }
    return parse_dist_literal(e.value);
  } catch (const ParseError &) {
    throw;
  } catch (const Error &err) {
    fail(e, "'" + e.key + "': " + err.what());
  }
}

using StageMap = std::map<std::string, Entry>;

StageProfile build_profile(const StageMap &m) {
  Millis bin_width = 1.0;
  if (auto it = m.find("bin_width"); it != m.end()) {
    bin_width = parse_number(it->second);
    if (!(bin_width > 0.0)) fail(it->second, "bin_width must be positive");
  }
  StageProfile p;
  const std::pair<const char *, DelayDist *> slots[] = {
      {"fetch", &p.fetch_exec},
      {"infer_cpu", &p.infer_cpu},
      {"infer_gpu", &p.infer_gpu},
      {"disp_exec", &p.disp_exec},
      {"disp_block", &p.disp_block},
      {"inflation_fetch", &p.inflation.fetch},
      {"inflation_infer", &p.inflation.infer},
      {"inflation_disp", &p.inflation.disp},
  };
  for (const auto &[key, slot] : slots)
    if (auto it = m.find(key); it != m.end()) *slot = resolve_dist(it->second, bin_width);
  try {
    p.validate();
  } catch (const Error &err) {
    const Entry &any = m.begin()->second;
    fail(any, err.what());
  }
  return p;
}

}  // namespace

void Scenario::select_profile(const std::string &key) {
  const auto it = profiles.find(key);
  if (it == profiles.end()) {
    std::string known;
    for (const auto &k : profile_keys()) known += (known.empty() ? "" : ", ") + k;
    throw Error("unknown profile key '" + key + "' (available: " + known + ")");
  }
  profile_key = key;
  model.profile = it->second;
}

std::vector<std::string> Scenario::profile_keys() const {
  std::vector<std::string> out;
  for (const auto &kv : profiles) out.push_back(kv.first);
  return out;
}

VariantSpec parse_variant_spec(std::string_view text, int default_queue,
                               std::optional<Millis> default_theta) {
  const std::string s = trim(text);
  std::string name = s;
  std::optional<std::string> arg;
  if (const auto open = s.find('('); open != std::string::npos) {
    if (s.back() != ')') throw Error("malformed variant '" + s + "'");
    name = trim(s.substr(0, open));
    arg = trim(s.substr(open + 1, s.size() - open - 2));
  }
  auto number = [&](const std::string &v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      throw Error("bad argument in variant '" + s + "'");
    return out;
  };
  VariantSpec spec;
  if (name == "vanilla") {
    spec.kind = PipelineVariant::Kind::kVanilla;
    spec.queue_size = default_queue;
    if (arg) {
      const double q = number(*arg);
      if (q < 0 || q != std::floor(q)) throw Error("queue size must be a non-negative integer");
      spec.queue_size = static_cast<int>(q);
    }
    if (spec.queue_size == 0) spec = {PipelineVariant::Kind::kOnDemand, 0, std::nullopt};
  } else if (name == "on_demand") {
    spec = {PipelineVariant::Kind::kOnDemand, 0, std::nullopt};
  } else if (name == "zero_slack") {
    spec = {PipelineVariant::Kind::kZeroSlack, 0, default_theta};
    if (arg && *arg != "auto") {
      spec.theta = number(*arg);
      if (*spec.theta < 0) throw Error("theta must be >= 0");
    } else if (arg) {
      spec.theta.reset();
    }
  } else if (name == "contention_free") {
    spec = {PipelineVariant::Kind::kContentionFree, 0, std::nullopt};
  } else {
    throw Error("unknown variant '" + name +
                "' (expected vanilla, on_demand, zero_slack, contention_free)");
  }
  if (arg && name != "vanilla" && name != "zero_slack")
    throw Error("variant '" + name + "' takes no argument");
  return spec;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path &base_dir,
                        const std::string &origin) {
  const std::vector<Entry> entries = gather(text, base_dir, origin, 0);

  Scenario sc;
  sc.model.usb.bytes_per_microframe = 2688;
  std::map<std::string, StageMap> stages;
  const Entry *variant_list = nullptr;
  const Entry *profile_entry = nullptr;
  int queue_size = 4;
  std::optional<Millis> theta;

  for (const Entry &e : entries) {
    CameraConfig &cam = sc.model.camera;
    UsbLinkConfig &usb = sc.model.usb;
    if (e.section == "scenario") {
      if (e.key == "name") sc.name = e.value;
      if (e.key == "profile_key") profile_entry = &e;
    } else if (e.section == "camera") {
      if (e.key == "preset") {
        const auto p = find_camera_preset(e.value);
        if (!p) fail(e, "unknown camera preset '" + e.value + "'");
        cam.frame_rate = p->camera.frame_rate;
        cam.width = p->camera.width;
        cam.height = p->camera.height;
        cam.bits_per_pixel = p->camera.bits_per_pixel;
        usb = p->usb;
      } else if (e.key == "frame_rate") {
        cam.frame_rate = parse_number(e);
      } else if (e.key == "width") {
        cam.width = parse_int<int>(e);
      } else if (e.key == "height") {
        cam.height = parse_int<int>(e);
      } else if (e.key == "bits_per_pixel") {
        cam.bits_per_pixel = parse_int<int>(e);
      } else if (e.key == "capture_jitter") {
        cam.capture_jitter = parse_number(e);
      } else if (e.key == "min_capture_delay") {
        cam.min_capture_delay = parse_number(e);
      }
    } else if (e.section == "usb") {
      if (e.key == "bytes_per_microframe") usb.bytes_per_microframe = parse_int<std::int64_t>(e);
      if (e.key == "urb_microframes") usb.urb_microframes = parse_int<int>(e);
      if (e.key == "microframe_len") usb.microframe_len = parse_number(e);
      if (e.key == "protocol_microframes") usb.protocol_microframes = parse_int<int>(e);
    } else if (section_kind(e.section) == "stages") {
      const std::string key = e.section == "stages" ? "" : e.section.substr(7);
      stages[key].insert_or_assign(e.key, e);
    } else if (e.section == "variants") {
      if (e.key == "list") variant_list = &e;
      if (e.key == "queue_size") {
        queue_size = parse_int<int>(e);
        if (queue_size < 0) fail(e, "queue_size must be >= 0");
      }
      if (e.key == "theta") {
        if (e.value == "auto") {
          theta.reset();
        } else {
          theta = parse_number(e);
          if (*theta < 0) fail(e, "theta must be >= 0");
        }
      }
    } else if (e.section == "simulation") {
      SimSettings &sim = sc.sim;
      if (e.key == "duration") sim.duration = parse_number(e);
      if (e.key == "seed") sim.seed = parse_int<std::uint64_t>(e);
      if (e.key == "objects") {
        const auto n = parse_int<long long>(e);
        if (n < 1) fail(e, "objects must be >= 1");
        sim.objects = static_cast<std::size_t>(n);
      }
      if (e.key == "warmup") sim.warmup = parse_number(e);
      if (e.key == "urb_phase") sim.urb_phase = parse_number(e);
      if (e.key == "object_times") {
        sim.object_times.clear();
        for (const std::string &t : split_top_level(e.value)) {
          sim.object_times.push_back(parse_number(e, t));
          if (sim.object_times.back() < 0) fail(e, "object_times must be >= 0");
        }
      }
    }
  }

  // Keyed profiles overlay the shared [stages] section, which on its own is
  // the "default" profile only when no keyed profile exists.
  const StageMap shared = stages[""];
  for (const auto &[key, map] : stages) {
    if (key.empty()) continue;
    StageMap merged = shared;
    for (const auto &kv : map) merged.insert_or_assign(kv.first, kv.second);
    sc.profiles[key] = build_profile(merged);
  }
  if (sc.profiles.empty() && !shared.empty()) sc.profiles["default"] = build_profile(shared);
  if (sc.profiles.empty()) fail_at(origin, 1, "scenario defines no [stages] profile");
  if (profile_entry) {
    if (!sc.profiles.count(profile_entry->value))
      fail(*profile_entry, "unknown profile key '" + profile_entry->value + "'");
    sc.select_profile(profile_entry->value);
  } else {
    sc.select_profile(sc.profiles.count("default") ? "default" : sc.profiles.begin()->first);
  }

  if (variant_list) {
    for (const std::string &item : split_top_level(variant_list->value)) {
      try {
        sc.variants.push_back(parse_variant_spec(item, queue_size, theta));
      } catch (const Error &err) {
        fail(*variant_list, err.what());
      }
    }
  } else {
    sc.variants = {parse_variant_spec("vanilla", queue_size, theta),
                   {PipelineVariant::Kind::kOnDemand, 0, std::nullopt},
                   {PipelineVariant::Kind::kZeroSlack, 0, theta},
                   {PipelineVariant::Kind::kContentionFree, 0, std::nullopt}};
  }

  try {
    sc.model.validate();
    if (!(sc.sim.duration > 0.0)) throw Error("simulation duration must be positive");
    if (sc.sim.warmup < 0.0 || sc.sim.warmup >= sc.sim.duration)
      throw Error("simulation warmup must lie in [0, duration)");
    if (sc.sim.urb_phase &&
        (*sc.sim.urb_phase < 0.0 || *sc.sim.urb_phase >= sc.model.usb.urb_period()))
      throw Error("simulation urb_phase must lie in [0, M*U)");
  } catch (const ParseError &) {
    throw;
  } catch (const Error &err) {
    throw ParseError(origin + ": " + err.what());
  }
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path(), path.string());
}

Scenario load_preset(std::string_view name) {
  const auto p = find_scenario_preset(name);
  if (!p) {
    std::string known;
    for (const auto &s : scenario_presets()) known += (known.empty() ? "" : ", ") + std::string(s.name);
    throw ParseError("unknown preset '" + std::string(name) + "' (available: " + known + ")");
  }
  return parse_scenario(p->text, std::filesystem::current_path(), "preset:" + std::string(p->name));
}

PipelineVariant resolve_variant(const Scenario &s, const VariantSpec &spec) {
  switch (spec.kind) {
    case PipelineVariant::Kind::kVanilla:
      return PipelineVariant::vanilla(spec.queue_size);
    case PipelineVariant::Kind::kOnDemand:
      return PipelineVariant::on_demand();
    case PipelineVariant::Kind::kZeroSlack:
      return PipelineVariant::zero_slack(spec.theta ? *spec.theta : safe_theta(s.model));
    case PipelineVariant::Kind::kContentionFree:
      return PipelineVariant::contention_free();
  }
  throw Error("unknown variant kind");
}

std::vector<PipelineVariant> resolve_variants(const Scenario &s) {
  std::vector<PipelineVariant> out;
  for (const VariantSpec &v : s.variants) out.push_back(resolve_variant(s, v));
  return out;
}

SimConfig make_sim_config(const Scenario &s, const PipelineVariant &variant) {
  SimConfig cfg;
  cfg.camera = s.model.camera;
  cfg.usb = s.model.usb;
  cfg.profile = s.model.profile;
  cfg.variant = variant;
  cfg.duration = s.sim.duration;
  cfg.seed = s.sim.seed;
  cfg.urb_phase = s.sim.urb_phase;
  if (!s.sim.object_times.empty()) {
    cfg.objects.kind = ObjectInjection::Kind::kExplicit;
    cfg.objects.times = s.sim.object_times;
  } else {
    cfg.objects.count = s.sim.objects;
    cfg.objects.warmup = s.sim.warmup;
  }
  return cfg;
}

}  // namespace odlat
