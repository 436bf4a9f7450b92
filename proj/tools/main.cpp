#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "oadc/analysis.hpp"
#include "oadc/csv.hpp"
#include "oadc/experiment.hpp"

namespace {

oadc::Vec parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw oadc::ConfigError("cannot parse '" + item + "' in " + what);
    }
  }
  if (values.empty()) throw oadc::ConfigError(what + " must not be empty");
  oadc::Vec v(values.size());
  for (size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

oadc::Mat parse_mass_arg(const std::string& text, int dim_hint) {
  if (text == "I" || text == "identity") {
    return oadc::Mat::Identity(dim_hint, dim_hint);
  }
  const oadc::Vec diag = parse_number_list(text, "--mass");
  return oadc::Mat(diag.asDiagonal());
}

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int epochs = 0;
  bool epochs_set = false;
  std::string out_dir;
  std::string controller;
  bool quiet = false;
};

oadc::CliOptions to_options(const CommonFlags& flags) {
  oadc::CliOptions options;
  if (flags.seed_set) options.seed = flags.seed;
  if (flags.epochs_set) options.epochs = flags.epochs;
  if (!flags.out_dir.empty()) options.out_dir = flags.out_dir;
  if (!flags.controller.empty()) {
    if (flags.controller == "aware") {
      options.controller = oadc::ControllerKind::ObstacleAware;
    } else if (flags.controller == "baseline") {
      options.controller = oadc::ControllerKind::VelocityPreserving;
    } else {
      throw oadc::ConfigError("--controller must be 'aware' or 'baseline'");
    }
  }
  options.quiet = flags.quiet;
  return options;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_controller) {
  cmd->add_option("--config", flags.config_path, "experiment config file")->required();
  cmd->add_option("--seed", flags.seed, "override the noise seed")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--epochs", flags.epochs, "override the sweep epoch count")
      ->each([&](const std::string&) { flags.epochs_set = true; });
  cmd->add_option("--out", flags.out_dir, "output directory (default: config, $OADC_OUT_DIR, ./out)");
  if (with_controller) {
    cmd->add_option("--controller", flags.controller, "force controller: aware|baseline");
  }
  cmd->add_flag("--quiet", flags.quiet, "suppress the result summary");
}

int run_and_report(const CommonFlags& flags,
                   oadc::CommandResult (*command)(const oadc::ExperimentConfig&,
                                                  const oadc::CliOptions&)) {
  const oadc::CliOptions options = to_options(flags);
  const oadc::ExperimentConfig config = oadc::load_config(flags.config_path);
  const oadc::CommandResult result = command(config, options);
  if (!options.quiet && !result.message.empty()) std::cout << result.message;
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"obstacle-aware passive damping control experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "simulate a configured scenario");
  add_common_flags(run_cmd, run_flags, /*with_controller=*/true);

  CommonFlags sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo noise sweep, both controllers");
  add_common_flags(sweep_cmd, sweep_flags, /*with_controller=*/false);

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "closed-form analysis helpers");
  analyze_cmd->require_subcommand(1);

  std::string mass_arg = "I";
  double dt_arg = 0.01;
  CLI::App* limit_cmd = analyze_cmd->add_subcommand(
      "damping-limit", "largest stable damping of the discrete loop");
  limit_cmd->add_option("--mass", mass_arg, "mass matrix: 'I' or diagonal list, e.g. 2,8");
  limit_cmd->add_option("--dt", dt_arg, "time step in seconds")->required();

  std::string f_arg = "1,0";
  std::string s_arg = "1,1";
  std::string map_out;
  int map_resolution = 101;
  CLI::App* passivity_cmd =
      analyze_cmd->add_subcommand("passivity", "non-passive velocity region for given f and S");
  passivity_cmd->add_option("--f", f_arg, "desired velocity, e.g. 1,0")->required();
  passivity_cmd->add_option("--s", s_arg, "axis-aligned damping values, e.g. 4,1")->required();
  passivity_cmd->add_option("--map-out", map_out, "write a vx,vy,dissipation grid CSV here");
  passivity_cmd->add_option("--map-resolution", map_resolution, "grid resolution per axis");

  double sf_arg = 0.0, m_arg = 1.0, d_arg = 0.0;
  CLI::App* impulse_cmd =
      analyze_cmd->add_subcommand("impulse-bound", "collision-free impact velocity bound");
  impulse_cmd->add_option("--sf", sf_arg, "flow damping value s_f in 1/s")->required();
  impulse_cmd->add_option("--m", m_arg, "agent mass in kg")->required();
  impulse_cmd->add_option("--d", d_arg, "initial gap to the surface in m")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_and_report(run_flags, oadc::cmd_run);
    if (sweep_cmd->parsed()) return run_and_report(sweep_flags, oadc::cmd_sweep);

    if (limit_cmd->parsed()) {
      const oadc::Mat mass = parse_mass_arg(mass_arg, 2);
      std::cout << oadc::format_double(oadc::discrete_damping_limit(mass, dt_arg)) << "\n";
      return 0;
    }
    if (passivity_cmd->parsed()) {
      const oadc::Vec f = parse_number_list(f_arg, "--f");
      const oadc::Vec s = parse_number_list(s_arg, "--s");
      if (f.size() != s.size()) throw oadc::ConfigError("--f and --s need equal lengths");
      const oadc::Mat damping = oadc::Mat(s.asDiagonal());
      const auto boundary = oadc::passivity_boundary(f, oadc::Mat::Identity(f.size(), f.size()), s);
      std::cout << "center:";
      for (Eigen::Index i = 0; i < f.size(); ++i)
        std::cout << ' ' << oadc::format_double(boundary.center[i]);
      std::cout << "\nsemi_axes:";
      for (Eigen::Index i = 0; i < f.size(); ++i)
        std::cout << ' ' << oadc::format_double(boundary.semi_axes[i]);
      std::cout << "\n";
      if (!map_out.empty()) {
        std::ofstream out(map_out, std::ios::binary);
        if (!out) throw oadc::IoError("cannot write " + map_out);
        out << oadc::passivity_map_csv(f, damping, 2.0 * f.norm() + 1.0, map_resolution);
      }
      return 0;
    }
    if (impulse_cmd->parsed()) {
      oadc::DampingSpec spec;
      spec.s_obs = sf_arg;
      spec.s_follow = sf_arg;
      spec.s_compliant = sf_arg;
      const auto bound = oadc::collision_impulse_bound(spec, m_arg, d_arg);
      std::cout << oadc::format_double(bound.max_impact_speed) << "\n";
      return 0;
    }
  } catch (const oadc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return oadc::kExitConfig;
  } catch (const oadc::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return oadc::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
