#include "oadc/experiment.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oadc/csv.hpp"

namespace oadc {

namespace {

using Json = nlohmann::ordered_json;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

SimConfig configured_sim(const ExperimentConfig& config, const RunVariant& run,
                         const CliOptions& options) {
  SimConfig sim = config.sim_config(run);
  if (options.seed) sim.noise.seed = *options.seed;
  if (options.controller) sim.controller = *options.controller;
  return sim;
}

std::string controller_name(ControllerKind kind) {
  return kind == ControllerKind::ObstacleAware ? "obstacle_aware" : "velocity_preserving";
}

}  // namespace

std::filesystem::path resolve_output_dir(const ExperimentConfig& config,
                                         const CliOptions& options) {
  if (options.out_dir) return *options.out_dir;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("OADC_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "out";
}

CommandResult cmd_run(const ExperimentConfig& config, const CliOptions& options) {
  const std::filesystem::path out_dir = resolve_output_dir(config, options);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  Json summary;
  summary["seed"] = options.seed.value_or(config.noise.seed);
  summary["controller"] = controller_name(options.controller.value_or(config.controller));
  summary["runs"] = Json::array();

  CommandResult result;
  std::ostringstream message;
  for (const auto& variant : config.runs) {
    const SimConfig sim = configured_sim(config, variant, options);
    const TrajectoryRecord record = run(sim);

    write_file(out_dir / ("trajectory_" + variant.name + ".csv"),
               trajectory_csv(record, sim.dim()));

    Json jr;
    jr["name"] = variant.name;
    jr["min_signed_distance"] = record.metrics.min_signed_distance;
    jr["max_control_force"] = record.metrics.max_control_force;
    jr["diverged"] = record.metrics.diverged;
    jr["divergence_step"] = record.metrics.divergence_step;
    jr["rows"] = record.rows.size();
    summary["runs"].push_back(jr);

    if (record.metrics.diverged) {
      result.exit_code = kExitDiverged;
      message << "run '" << variant.name << "' diverged to a non-finite state at step "
              << record.metrics.divergence_step << " (t = "
              << format_double(record.metrics.divergence_step * sim.dt) << " s)\n";
    } else {
      message << "run '" << variant.name
              << "': min signed distance = " << format_double(record.metrics.min_signed_distance)
              << " m, max |tau_c| = " << format_double(record.metrics.max_control_force) << " N\n";
    }
  }

  write_file(out_dir / "metrics.json", summary.dump(2) + "\n");
  result.message = message.str();
  return result;
}

CommandResult cmd_sweep(const ExperimentConfig& config, const CliOptions& options) {
  if (!config.sweep) throw ConfigError("config has no 'sweep' section");
  const SweepSpec& sweep = *config.sweep;
  const int epochs = options.epochs.value_or(sweep.epochs);
  if (epochs < 1) throw ConfigError("epochs must be >= 1");

  const std::filesystem::path out_dir = resolve_output_dir(config, options);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  // Both controllers see identical seeds so epochs are paired.
  SimConfig aware = configured_sim(config, config.runs.front(), options);
  aware.controller = ControllerKind::ObstacleAware;
  SimConfig baseline = aware;
  baseline.controller = ControllerKind::VelocityPreserving;

  std::ostringstream csv;
  csv << "level,controller,mean_min_distance,std_min_distance,mean_max_force,std_max_force,"
         "epochs,diverged_runs\n";
  std::ostringstream table;
  Json summary;
  summary["kind"] = sweep.kind == NoiseKind::Velocity ? "velocity" : "position";
  summary["seed"] = aware.noise.seed;
  summary["epochs"] = epochs;
  summary["levels"] = Json::array();

  for (const double level : sweep.levels) {
    const auto metrics_aware = run_epochs(aware, epochs, level, sweep.kind);
    const auto metrics_baseline = run_epochs(baseline, epochs, level, sweep.kind);
    const EpochStats stats_aware = summarize(metrics_aware, level);
    const EpochStats stats_baseline = summarize(metrics_baseline, level);

    for (const auto* stats : {&stats_aware, &stats_baseline}) {
      csv << format_double(level) << ','
          << (stats == &stats_aware ? "obstacle_aware" : "velocity_preserving") << ','
          << format_double(stats->mean_min_distance) << ','
          << format_double(stats->std_min_distance) << ','
          << format_double(stats->mean_max_force) << ',' << format_double(stats->std_max_force)
          << ',' << stats->epochs << ',' << stats->diverged_runs << '\n';
    }

    table << "noise level " << format_double(level)
          << (sweep.kind == NoiseKind::Velocity ? " m/s" : " m") << "\n"
          << compare_controllers(metrics_aware, metrics_baseline, "obstacle_aware",
                                 "velocity_preserving")
                 .to_text()
          << "\n";

    Json jl;
    jl["level"] = level;
    jl["obstacle_aware"] = Json{{"mean_min_distance", stats_aware.mean_min_distance},
                                {"std_min_distance", stats_aware.std_min_distance}};
    jl["velocity_preserving"] = Json{{"mean_min_distance", stats_baseline.mean_min_distance},
                                     {"std_min_distance", stats_baseline.std_min_distance}};
    summary["levels"].push_back(jl);
  }

  write_file(out_dir / "sweep.csv", csv.str());
  write_file(out_dir / "comparison.txt", table.str());
  write_file(out_dir / "sweep_summary.json", summary.dump(2) + "\n");

  CommandResult result;
  result.message = table.str();
  return result;
}

}  // namespace oadc
