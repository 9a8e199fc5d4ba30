// odlat: end-to-end delay bounds and simulation for camera-based object
// detection pipelines.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "odlat/analyzer.hpp"
#include "odlat/presets.hpp"
#include "odlat/report.hpp"
#include "odlat/scenario.hpp"
#include "odlat/simulator.hpp"
#include "odlat/validation.hpp"

namespace fs = std::filesystem;
using namespace odlat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::string preset;
  std::string out;
  std::string format = "table";
  std::optional<std::uint64_t> seed;
  bool trace = false;
  bool compare = false;
  double shrink = 0.0;
  std::string param;
  std::string values;
};

OutputFormat output_format(const Options &o) {
  return o.format == "csv" ? OutputFormat::kCsv : OutputFormat::kTable;
}

Scenario load(const Options &o) {
  if (o.scenario.empty() == o.preset.empty())
    throw UsageError("give exactly one of a scenario file or --preset");
  Scenario sc = o.preset.empty() ? load_scenario_file(o.scenario) : load_preset(o.preset);
  if (o.seed) sc.sim.seed = *o.seed;
  return sc;
}

void write_file(const Options &o, const std::string &name, const std::string &content) {
  fs::create_directories(o.out);
  const fs::path p = fs::path(o.out) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write '" + p.string() + "'");
  f << content;
}

// File-name prefixes, made unique when a variant repeats.
std::vector<std::string> variant_keys(const std::vector<PipelineVariant> &vs) {
  std::vector<std::string> keys;
  std::map<std::string, int> seen;
  for (const auto &v : vs) {
    const int n = seen[v.key()]++;
    keys.push_back(n ? v.key() + "_" + std::to_string(n + 1) : v.key());
  }
  return keys;
}

int cmd_analyze(const Options &o) {
  const Scenario sc = load(o);
  std::vector<E2EBounds> rows;
  for (const auto &v : resolve_variants(sc)) rows.push_back(analyze(sc.model, v));
  const std::string table = bounds_report(rows, output_format(o));
  std::cout << table;
  if (!o.out.empty()) {
    write_file(o, "bounds.csv", bounds_report(rows, OutputFormat::kCsv));
    write_file(o, "bounds.json", bounds_json(rows));
  }
  if (o.compare) {
    CompareOptions opt;
    opt.queue_size = 4;
    for (const auto &spec : sc.variants) {
      if (spec.kind == PipelineVariant::Kind::kVanilla) {
        opt.queue_size = spec.queue_size;
        break;
      }
    }
    for (const auto &spec : sc.variants) {
      if (spec.kind == PipelineVariant::Kind::kZeroSlack) {
        opt.theta = spec.theta;
        break;
      }
    }
    opt.duration = sc.sim.duration;
    opt.seed = sc.sim.seed;
    opt.objects = sc.sim.objects;
    opt.warmup = sc.sim.warmup;
    const auto cmp = compare_variants(sc.model, opt);
    std::cout << (output_format(o) == OutputFormat::kTable ? "\n" : "")
              << comparison_report(cmp, output_format(o));
    if (!o.out.empty()) write_file(o, "comparison.csv", comparison_report(cmp, OutputFormat::kCsv));
  }
  return kExitOk;
}

int cmd_simulate(const Options &o) {
  const Scenario sc = load(o);
  const auto variants = resolve_variants(sc);
  const auto keys = variant_keys(variants);
  std::vector<SimSummaryRow> rows;
  std::string traces;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    SimConfig cfg = make_sim_config(sc, variants[i]);
    cfg.record_trace = o.trace;
    const SimResult sim = run(cfg);
    const RunStats st = run_stats(sim);
    rows.push_back({variants[i], st});
    if (!o.out.empty()) {
      const std::vector<Millis> e2e = steady_e2e(sim);
      write_file(o, keys[i] + "_summary.json", sim_summary_json(variants[i], sim, st, cfg.seed));
      write_file(o, keys[i] + "_e2e_hist.csv", histogram_csv(e2e));
      write_file(o, keys[i] + "_cycle_hist.csv", histogram_csv(sim.cycle_times));
      write_file(o, keys[i] + "_queue_hist.csv", histogram_csv(sim.queue_delays));
      write_file(o, keys[i] + "_e2e_samples.csv", samples_csv(e2e, "e2e_ms"));
      if (o.trace) write_file(o, keys[i] + "_trace.tsv", format_trace(sim.trace));
    } else if (o.trace) {
      traces += "# trace " + variants[i].name() + "\n" + format_trace(sim.trace);
    }
  }
  const Millis arrival_mean = arrival_distribution(sc.model.camera, sc.model.usb).mean();
  const std::string summary = sim_summary_report(rows, arrival_mean, output_format(o));
  std::cout << summary << traces;
  if (!o.out.empty()) write_file(o, "summary.csv", sim_summary_report(rows, arrival_mean, OutputFormat::kCsv));
  return kExitOk;
}

int cmd_validate(const Options &o) {
  if (o.shrink < 0.0) throw UsageError("--shrink-bounds must be >= 0");
  const Scenario sc = load(o);
  const auto variants = resolve_variants(sc);
  const auto keys = variant_keys(variants);
  bool ok = true;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const SimResult sim = run(make_sim_config(sc, variants[i]));
    const E2EBounds bounds = analyze(sc.model, variants[i]);
    const ValidationReport rep = validate_against_analysis(sim, bounds, o.shrink);
    ok = ok && rep.ok();
    std::cout << validation_report(variants[i], bounds, rep, output_format(o));
    if (!o.out.empty())
      write_file(o, keys[i] + "_validation.csv",
                 validation_report(variants[i], bounds, rep, OutputFormat::kCsv));
  }
  if (output_format(o) == OutputFormat::kTable)
    std::cout << (ok ? "all delays within bounds\n" : "bound violations found\n");
  return ok ? kExitOk : kExitValidation;
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// "lo..hi" (step 1), "lo..hi:step" or a comma list.
std::vector<std::string> expand_values(const std::string &text) {
  std::vector<std::string> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    std::string hi_text = text.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = hi_text.find(':'); colon != std::string::npos) {
      step = std::stod(hi_text.substr(colon + 1));
      hi_text = hi_text.substr(0, colon);
    }
    const double lo = std::stod(text.substr(0, dots));
    const double hi = std::stod(hi_text);
    if (!(step > 0.0) || hi < lo) throw UsageError("bad range '" + text + "'");
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(number_text(lo + i * step));
    return out;
  }
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (out.empty()) throw UsageError("no sweep values given");
  return out;
}

double as_number(const std::string &v, const std::string &param) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != v.size()) throw UsageError("sweep value '" + v + "' for " + param + " is not a number");
  return d;
}

int cmd_sweep(const Options &o) {
  const Scenario base = load(o);
  std::vector<SweepRow> rows;
  std::size_t index = 0;
  for (const std::string &value : expand_values(o.values)) {
    Scenario sc = base;
    PipelineVariant variant = PipelineVariant::on_demand();
    SweepRow row;
    row.value = value;
    if (o.param == "queue_size") {
      const double q = as_number(value, o.param);
      if (q < 0 || q != std::floor(q)) throw UsageError("queue_size values must be integers >= 0");
      variant = PipelineVariant::vanilla(static_cast<int>(q));
      row.order = q;
    } else if (o.param == "theta") {
      row.order = as_number(value, o.param);
      variant = PipelineVariant::zero_slack(row.order);
    } else if (o.param == "frame_rate") {
      row.order = as_number(value, o.param);
      sc.model.camera.frame_rate = row.order;
      variant = resolve_variant(sc, sc.variants.front());
    } else {
      sc.select_profile(value);
      std::size_t used = 0;
      try {
        row.order = std::stod(value, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != value.size()) row.order = static_cast<double>(index);
      variant = resolve_variant(sc, sc.variants.front());
    }
    ++index;
    const RunStats st = run_stats(run(make_sim_config(sc, variant)));
    row.mean_delay = st.mean_e2e;
    row.mean_cycle = st.mean_cycle;
    rows.push_back(row);
  }
  std::cout << sweep_report(o.param, rows, output_format(o));
  if (!o.out.empty())
    write_file(o, "sweep_" + o.param + ".csv", sweep_report(o.param, rows, OutputFormat::kCsv));
  return kExitOk;
}

void add_common(CLI::App *cmd, Options &o) {
  cmd->add_option("scenario", o.scenario, "Scenario file");
  cmd->add_option("--preset", o.preset, "Built-in scenario instead of a file");
  cmd->add_option("--out", o.out, "Directory for output files");
  cmd->add_option("--format", o.format, "Console output format")
      ->check(CLI::IsMember({"table", "csv"}));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"End-to-end delay bounds and simulation for camera-based object detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "odlat 1.0.0");
  Options o;

  std::string preset_help = "Presets:";
  for (const auto &p : scenario_presets())
    preset_help += "\n  " + std::string(p.name) + "  " + std::string(p.summary);
  app.footer(preset_help);

  auto *analyze_cmd = app.add_subcommand("analyze", "Analytical delay bounds per variant");
  add_common(analyze_cmd, o);
  analyze_cmd->add_flag("--compare", o.compare, "Also simulate the staged optimizations");

  auto *simulate_cmd = app.add_subcommand("simulate", "Run the discrete-event simulation");
  add_common(simulate_cmd, o);
  simulate_cmd->add_option("--seed", o.seed, "Override the scenario seed");
  simulate_cmd->add_flag("--trace", o.trace, "Record and emit the event trace");

  auto *validate_cmd = app.add_subcommand("validate", "Check simulated delays against the bounds");
  add_common(validate_cmd, o);
  validate_cmd->add_option("--seed", o.seed, "Override the scenario seed");
  validate_cmd->add_option("--shrink-bounds", o.shrink, "Tighten every bound by this many ms");

  auto *sweep_cmd = app.add_subcommand("sweep", "Mean delay and cycle time over a parameter");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--seed", o.seed, "Override the scenario seed");
  sweep_cmd->add_option("--param", o.param, "Swept parameter")
      ->required()
      ->check(CLI::IsMember({"queue_size", "theta", "frame_rate", "nn_resolution"}));
  sweep_cmd->add_option("--values", o.values, "Values: lo..hi, lo..hi:step or a comma list")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(o);
    if (*simulate_cmd) return cmd_simulate(o);
    if (*validate_cmd) return cmd_validate(o);
    return cmd_sweep(o);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}
