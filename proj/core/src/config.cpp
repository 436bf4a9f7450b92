#include "oadc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace oadc {

namespace {

using Json = nlohmann::ordered_json;

void check_keys(const Json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

Vec parse_vec(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a non-empty array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + " must contain numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json vec_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

double require_number(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(where + " requires numeric '" + key + "'");
  }
  return obj[key].get<double>();
}

Obstacle parse_obstacle(const Json& j, size_t index) {
  const std::string where = "obstacles[" + std::to_string(index) + "]";
  check_keys(j, where, {"shape", "center", "radius", "half_extents", "margin", "reference_point"});
  if (!j.contains("shape")) throw ConfigError(where + " requires 'shape'");
  const std::string shape = j["shape"].get<std::string>();
  const Vec center = parse_vec(j.at("center"), where + ".center");
  const double margin = j.contains("margin") ? require_number(j, "margin", where) : 0.0;
  std::optional<Vec> ref;
  if (j.contains("reference_point")) ref = parse_vec(j["reference_point"], where + ".reference_point");

  if (shape == "sphere") {
    if (j.contains("half_extents")) throw ConfigError(where + ": sphere takes no half_extents");
    return Obstacle::sphere(center, require_number(j, "radius", where), margin, ref);
  }
  if (shape == "box") {
    if (j.contains("radius")) throw ConfigError(where + ": box takes no radius");
    return Obstacle::box(center, parse_vec(j.at("half_extents"), where + ".half_extents"), margin,
                         ref);
  }
  throw ConfigError(where + ": shape must be 'sphere' or 'box'");
}

Json obstacle_json(const Obstacle& o) {
  Json j;
  j["shape"] = o.shape == Obstacle::Shape::Sphere ? "sphere" : "box";
  j["center"] = vec_json(o.center);
  if (o.shape == Obstacle::Shape::Sphere) {
    j["radius"] = o.radius;
  } else {
    j["half_extents"] = vec_json(o.half_extents);
  }
  j["margin"] = o.margin;
  j["reference_point"] = vec_json(o.reference_point);
  return j;
}

Environment parse_scene_json(const Json& j) {
  check_keys(j, "scene", {"version", "obstacles"});
  if (!j.contains("version") || j["version"].get<int>() != 1) {
    throw ConfigError("scene requires version 1");
  }
  Environment env;
  if (j.contains("obstacles")) {
    for (size_t i = 0; i < j["obstacles"].size(); ++i) {
      env.obstacles.push_back(parse_obstacle(j["obstacles"][i], i));
    }
  }
  env.validate();
  return env;
}

Json scene_json(const Environment& env) {
  Json j;
  j["version"] = 1;
  j["obstacles"] = Json::array();
  for (const auto& o : env.obstacles) j["obstacles"].push_back(obstacle_json(o));
  return j;
}

BaseField parse_field(const Json& j) {
  check_keys(j, "field",
             {"kind", "attractor", "speed_cap", "direction", "speed", "angle", "modulated"});
  if (!j.contains("kind")) throw ConfigError("field requires 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "linear_attractor") {
    return BaseField::linear_attractor(parse_vec(j.at("attractor"), "field.attractor"),
                                       require_number(j, "speed_cap", "field"));
  }
  if (kind == "constant") {
    return BaseField::constant(parse_vec(j.at("direction"), "field.direction"),
                               require_number(j, "speed", "field"));
  }
  if (kind == "rotated_linear") {
    return BaseField::rotated_linear(parse_vec(j.at("attractor"), "field.attractor"),
                                     require_number(j, "angle", "field"),
                                     require_number(j, "speed_cap", "field"));
  }
  throw ConfigError("field.kind must be linear_attractor, constant or rotated_linear");
}

Json field_json(const BaseField& f, bool modulated) {
  Json j;
  switch (f.kind) {
    case BaseField::Kind::LinearAttractor:
      j["kind"] = "linear_attractor";
      j["attractor"] = vec_json(f.attractor);
      j["speed_cap"] = f.speed_cap;
      break;
    case BaseField::Kind::Constant:
      j["kind"] = "constant";
      j["direction"] = vec_json(f.direction);
      j["speed"] = f.speed;
      break;
    case BaseField::Kind::RotatedLinear:
      j["kind"] = "rotated_linear";
      j["attractor"] = vec_json(f.attractor);
      j["angle"] = f.angle;
      j["speed_cap"] = f.speed_cap;
      break;
  }
  j["modulated"] = modulated;
  return j;
}

ControllerKind parse_controller_kind(const std::string& name) {
  if (name == "obstacle_aware" || name == "aware") return ControllerKind::ObstacleAware;
  if (name == "velocity_preserving" || name == "baseline") {
    return ControllerKind::VelocityPreserving;
  }
  throw ConfigError("controller.kind must be obstacle_aware or velocity_preserving");
}

DisturbanceSchedule parse_disturbances(const Json& j, const std::string& where) {
  DisturbanceSchedule schedule;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string item = where + "[" + std::to_string(i) + "]";
    check_keys(j[i], item, {"start", "duration", "force"});
    Impulse imp;
    imp.start = require_number(j[i], "start", item);
    imp.duration = require_number(j[i], "duration", item);
    imp.force = parse_vec(j[i].at("force"), item + ".force");
    schedule.impulses.push_back(std::move(imp));
  }
  return schedule;
}

Json disturbances_json(const DisturbanceSchedule& schedule) {
  Json j = Json::array();
  for (const auto& imp : schedule.impulses) {
    Json ji;
    ji["start"] = imp.start;
    ji["duration"] = imp.duration;
    ji["force"] = vec_json(imp.force);
    j.push_back(ji);
  }
  return j;
}

Mat parse_mass(const Json& j, const std::string& where) {
  if (j.is_number()) {
    // Scalar masses are resolved against the start dimension later.
    Mat m(1, 1);
    m(0, 0) = j.get<double>();
    return m;
  }
  if (j.is_array() && !j.empty() && j[0].is_number()) {
    const Vec diag = parse_vec(j, where);
    return Mat(diag.asDiagonal());
  }
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    const size_t n = j.size();
    Mat m(n, n);
    for (size_t r = 0; r < n; ++r) {
      if (j[r].size() != n) throw ConfigError(where + " must be square");
      for (size_t c = 0; c < n; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
  }
  throw ConfigError(where + " must be a number, a diagonal array or a matrix");
}

Json mass_json(const Mat& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

std::pair<Vec, Vec> parse_start(const Json& j, const std::string& where) {
  check_keys(j, where, {"position", "velocity"});
  const Vec position = parse_vec(j.at("position"), where + ".position");
  Vec velocity = Vec::Zero(position.size());
  if (j.contains("velocity")) velocity = parse_vec(j["velocity"], where + ".velocity");
  return {position, velocity};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

Environment parse_scene(const std::string& json_text) {
  return parse_scene_json(parse_json_text(json_text, "scene"));
}

Environment load_scene(const std::filesystem::path& path) {
  return parse_scene(read_file(path));
}

std::string serialize_scene(const Environment& env) { return scene_json(env).dump(2) + "\n"; }

ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir) {
  const Json j = parse_json_text(json_text, "config");
  check_keys(j, "config",
             {"version", "scene", "field", "controller", "plant", "start", "noise", "disturbances",
              "runs", "sweep", "output_dir"});

  ExperimentConfig cfg;
  if (!j.contains("version") || j["version"].get<int>() != 1) {
    throw ConfigError("config requires version 1");
  }

  if (!j.contains("scene")) throw ConfigError("config requires 'scene'");
  if (j["scene"].is_string()) {
    cfg.scene_path = j["scene"].get<std::string>();
    cfg.env = load_scene(base_dir / cfg.scene_path);
  } else {
    cfg.env = parse_scene_json(j["scene"]);
  }

  if (!j.contains("field")) throw ConfigError("config requires 'field'");
  cfg.field = parse_field(j["field"]);
  cfg.modulated = j["field"].value("modulated", true);

  if (!j.contains("plant")) throw ConfigError("config requires 'plant'");
  const Json& plant = j["plant"];
  check_keys(plant, "plant", {"mass", "dt", "horizon", "gravity"});
  cfg.dt = require_number(plant, "dt", "plant");
  cfg.horizon = require_number(plant, "horizon", "plant");
  if (!plant.contains("mass")) throw ConfigError("plant requires 'mass'");
  Mat mass = parse_mass(plant["mass"], "plant.mass");

  if (j.contains("runs")) {
    if (j.contains("start") || j.contains("disturbances")) {
      throw ConfigError("use either top-level start/disturbances or 'runs', not both");
    }
    for (size_t i = 0; i < j["runs"].size(); ++i) {
      const std::string where = "runs[" + std::to_string(i) + "]";
      const Json& jr = j["runs"][i];
      check_keys(jr, where, {"name", "start", "disturbances"});
      RunVariant run;
      if (!jr.contains("name")) throw ConfigError(where + " requires 'name'");
      run.name = jr["name"].get<std::string>();
      if (!jr.contains("start")) throw ConfigError(where + " requires 'start'");
      std::tie(run.start_position, run.start_velocity) = parse_start(jr["start"], where + ".start");
      if (jr.contains("disturbances")) {
        run.disturbances = parse_disturbances(jr["disturbances"], where + ".disturbances");
      }
      cfg.runs.push_back(std::move(run));
    }
    if (cfg.runs.empty()) throw ConfigError("'runs' must not be empty");
  } else {
    if (!j.contains("start")) throw ConfigError("config requires 'start' (or 'runs')");
    RunVariant run;
    std::tie(run.start_position, run.start_velocity) = parse_start(j["start"], "start");
    if (j.contains("disturbances")) {
      run.disturbances = parse_disturbances(j["disturbances"], "disturbances");
    }
    cfg.runs.push_back(std::move(run));
  }

  const int dim = static_cast<int>(cfg.runs.front().start_position.size());
  if (mass.rows() == 1 && dim > 1) mass = Mat::Identity(dim, dim) * mass(0, 0);
  cfg.plant.mass = mass;
  cfg.plant.gravity =
      plant.contains("gravity") ? parse_vec(plant["gravity"], "plant.gravity") : Vec::Zero(dim);

  if (!j.contains("controller")) throw ConfigError("config requires 'controller'");
  const Json& ctrl = j["controller"];
  check_keys(ctrl, "controller", {"kind", "s_obs", "s_follow", "s_compliant", "gamma_crit"});
  if (!ctrl.contains("kind")) throw ConfigError("controller requires 'kind'");
  cfg.controller = parse_controller_kind(ctrl["kind"].get<std::string>());
  const DampingSpec fallback =
      DampingSpec::recommended(cfg.plant.min_mass_eigenvalue(), cfg.dt);
  cfg.damping.s_obs = ctrl.contains("s_obs") ? require_number(ctrl, "s_obs", "controller")
                                             : fallback.s_obs;
  cfg.damping.s_follow = ctrl.contains("s_follow") ? require_number(ctrl, "s_follow", "controller")
                                                   : fallback.s_follow;
  cfg.damping.s_compliant = ctrl.contains("s_compliant")
                                ? require_number(ctrl, "s_compliant", "controller")
                                : fallback.s_compliant;
  cfg.damping.gamma_crit =
      ctrl.contains("gamma_crit") ? require_number(ctrl, "gamma_crit", "controller") : 3.0;

  if (j.contains("noise")) {
    check_keys(j["noise"], "noise", {"velocity_std", "position_std", "seed"});
    cfg.noise.velocity_std = j["noise"].value("velocity_std", 0.0);
    cfg.noise.position_std = j["noise"].value("position_std", 0.0);
    cfg.noise.seed = j["noise"].value("seed", std::uint64_t{0});
  }

  if (j.contains("sweep")) {
    check_keys(j["sweep"], "sweep", {"kind", "levels", "epochs"});
    SweepSpec sweep;
    const std::string kind = j["sweep"].value("kind", std::string("velocity"));
    if (kind == "velocity") {
      sweep.kind = NoiseKind::Velocity;
    } else if (kind == "position") {
      sweep.kind = NoiseKind::Position;
    } else {
      throw ConfigError("sweep.kind must be 'velocity' or 'position'");
    }
    if (!j["sweep"].contains("levels")) throw ConfigError("sweep requires 'levels'");
    for (const auto& level : j["sweep"]["levels"]) sweep.levels.push_back(level.get<double>());
    sweep.epochs = j["sweep"].value("epochs", 10);
    cfg.sweep = sweep;
  }

  cfg.output_dir = j.value("output_dir", std::string());

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  Json j;
  j["version"] = cfg.version;
  if (!cfg.scene_path.empty()) {
    j["scene"] = cfg.scene_path.string();
  } else {
    j["scene"] = scene_json(cfg.env);
  }
  j["field"] = field_json(cfg.field, cfg.modulated);
  j["controller"] = Json{{"kind", cfg.controller == ControllerKind::ObstacleAware
                                      ? "obstacle_aware"
                                      : "velocity_preserving"},
                         {"s_obs", cfg.damping.s_obs},
                         {"s_follow", cfg.damping.s_follow},
                         {"s_compliant", cfg.damping.s_compliant},
                         {"gamma_crit", cfg.damping.gamma_crit}};
  j["plant"] = Json{{"mass", mass_json(cfg.plant.mass)},
                    {"dt", cfg.dt},
                    {"horizon", cfg.horizon},
                    {"gravity", vec_json(cfg.plant.gravity)}};
  j["noise"] = Json{{"velocity_std", cfg.noise.velocity_std},
                    {"position_std", cfg.noise.position_std},
                    {"seed", cfg.noise.seed}};
  j["runs"] = Json::array();
  for (const auto& run : cfg.runs) {
    Json jr;
    jr["name"] = run.name;
    jr["start"] = Json{{"position", vec_json(run.start_position)},
                       {"velocity", vec_json(run.start_velocity)}};
    jr["disturbances"] = disturbances_json(run.disturbances);
    j["runs"].push_back(jr);
  }
  if (cfg.sweep) {
    j["sweep"] = Json{{"kind", cfg.sweep->kind == NoiseKind::Velocity ? "velocity" : "position"},
                      {"levels", cfg.sweep->levels},
                      {"epochs", cfg.sweep->epochs}};
  }
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  return j.dump(2) + "\n";
}

SimConfig ExperimentConfig::sim_config(const RunVariant& run) const {
  SimConfig sim;
  sim.env = env;
  sim.field = field;
  sim.modulated = modulated;
  sim.controller = controller;
  sim.damping = damping;
  sim.plant = plant;
  sim.dt = dt;
  sim.horizon = horizon;
  sim.start_position = run.start_position;
  sim.start_velocity = run.start_velocity;
  sim.noise = noise;
  sim.disturbances = run.disturbances;
  return sim;
}

void ExperimentConfig::validate() const {
  if (runs.empty()) throw ConfigError("config needs at least one run");
  for (const auto& run : runs) sim_config(run).validate();
  if (sweep) {
    if (sweep->levels.empty()) throw ConfigError("sweep.levels must not be empty");
    if (sweep->epochs < 1) throw ConfigError("sweep.epochs must be >= 1");
    for (double level : sweep->levels) {
      if (level < 0.0) throw ConfigError("sweep levels must be >= 0");
    }
  }
}

}  // namespace oadc
