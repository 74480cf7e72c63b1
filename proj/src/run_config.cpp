#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "ptycho/io.hpp"

namespace ptycho {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& path, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) bad(path, "unknown key \"" + key + "\" in " + where);
  }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& path) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad(path, "key \"" + key + "\" has the wrong type");
  }
}

template <typename T>
void read_optional(const json& obj, const std::string& key, T& out, const std::string& path) {
  if (obj.contains(key)) out = get_as<T>(obj, key, path);
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) bad(path, "missing required key \"" + key + "\"");
  return get_as<std::string>(obj, key, path);
}

SweepOrder parse_order(const std::string& s, const std::string& path) {
  if (s == "raster") return SweepOrder::Raster;
  if (s == "shuffle") return SweepOrder::RandomShuffle;
  bad(path, "epie_order must be \"raster\" or \"shuffle\", got \"" + s + "\"");
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);

  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    bad(path, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad(path, "top-level JSON value must be an object");

  static const std::set<std::string> known = {
      "init",        "probe",       "data",   "truth",      "output",     "step",
      "phase_max",   "oversample",  "weight", "w_decay",    "outer_iters", "epie_sweeps",
      "epie_order",  "seed",        "zero_guard", "alpha_base", "noise"};
  reject_unknown_keys(doc, known, path, "run config");

  RunConfig cfg;
  cfg.init_path = require_string(doc, "init", path);
  cfg.probe_path = require_string(doc, "probe", path);
  cfg.data_path = require_string(doc, "data", path);
  cfg.output_path = require_string(doc, "output", path);
  if (doc.contains("truth")) cfg.truth_path = get_as<std::string>(doc, "truth", path);

  if (!doc.contains("step")) bad(path, "missing required key \"step\"");
  cfg.step = get_as<int>(doc, "step", path);
  read_optional(doc, "phase_max", cfg.phase_max, path);

  read_optional(doc, "oversample", cfg.remix.oversample, path);
  read_optional(doc, "weight", cfg.remix.weight, path);
  read_optional(doc, "w_decay", cfg.remix.w_decay, path);
  read_optional(doc, "outer_iters", cfg.remix.outer_iters, path);
  read_optional(doc, "epie_sweeps", cfg.remix.epie_sweeps, path);
  if (doc.contains("epie_order")) {
    cfg.remix.epie_order = parse_order(get_as<std::string>(doc, "epie_order", path), path);
  }
  read_optional(doc, "seed", cfg.remix.seed, path);
  read_optional(doc, "zero_guard", cfg.remix.zero_guard, path);
  read_optional(doc, "alpha_base", cfg.remix.alpha_base, path);

  if (doc.contains("noise")) {
    const json& n = doc.at("noise");
    if (!n.is_object()) bad(path, "\"noise\" must be an object");
    reject_unknown_keys(n, {"photon_scale", "seed"}, path, "noise");
    NoiseSpec noise;
    if (!n.contains("photon_scale")) bad(path, "noise is missing \"photon_scale\"");
    noise.photon_scale = get_as<double>(n, "photon_scale", path);
    if (n.contains("seed")) noise.seed = get_as<std::uint64_t>(n, "seed", path);
    cfg.noise = noise;
  }

  if (cfg.step < 1) bad(path, "step must be >= 1");
  if (!(cfg.phase_max > 0.0)) bad(path, "phase_max must be > 0");
  try {
    cfg.remix.validate();
    if (cfg.noise) cfg.noise->validate();
  } catch (const Error& e) {
    bad(path, e.what());
  }
  return cfg;
}

}  // namespace ptycho
