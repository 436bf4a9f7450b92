#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oadc/simulator.hpp"

namespace oadc {

/// One named start/disturbance variant inside an experiment (the
/// multi-start scenarios run several of these against one scene).
struct RunVariant {
  std::string name = "main";
  Vec start_position;
  Vec start_velocity;
  DisturbanceSchedule disturbances;
};

struct SweepSpec {
  NoiseKind kind = NoiseKind::Velocity;
  std::vector<double> levels;
  int epochs = 10;
};

/// Fully resolved experiment description: the parsed config file with the
/// scene loaded and all defaults filled in.
struct ExperimentConfig {
  int version = 1;
  std::filesystem::path scene_path;  // as written in the file
  Environment env;
  BaseField field;
  bool modulated = true;
  ControllerKind controller = ControllerKind::ObstacleAware;
  DampingSpec damping;
  PlantModel plant;
  double dt = 0.01;
  double horizon = 10.0;
  NoiseSpec noise;
  std::vector<RunVariant> runs;  // at least one
  std::optional<SweepSpec> sweep;
  std::string output_dir;

  SimConfig sim_config(const RunVariant& run) const;
  void validate() const;
};

/// Loads and validates a config file. Scene paths are resolved relative
/// to the config file. Unknown keys anywhere are hard errors.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses a config document; `base_dir` resolves the scene reference.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir);

/// Canonical serialization; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

Environment load_scene(const std::filesystem::path& path);
Environment parse_scene(const std::string& json_text);
std::string serialize_scene(const Environment& env);

}  // namespace oadc
