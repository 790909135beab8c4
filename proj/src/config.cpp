#include "kreinforge/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace kreinforge {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed) {
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!allowed.count(it.key()))
      throw config_error("config: unknown key \"" + it.key() + "\"");
}

template <typename T>
T require(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw config_error("config: missing key \"" + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error("config: bad value for key \"" + key + "\"");
  }
}

template <typename T>
T optional_or(const json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error("config: bad value for key \"" + key + "\"");
  }
}

}  // namespace

ModelConfig parse_model_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw config_error("config: top-level object required");
  const std::string model = require<std::string>(doc, "model");

  if (model == "delta1d") {
    reject_unknown_keys(doc, {"model", "L", "P", "alpha"});
    Delta1DConfig cfg;
    cfg.box_length = require<double>(doc, "L");
    cfg.modes = require<int>(doc, "P");
    cfg.alpha = require<double>(doc, "alpha");
    cfg.validate();
    return cfg;
  }
  if (model == "nelson") {
    reject_unknown_keys(doc, {"model", "K", "B", "P", "N", "g", "schedule", "budget"});
    NelsonTruncConfig cfg;
    cfg.boson_modes = require<int>(doc, "K");
    cfg.max_bosons = require<int>(doc, "B");
    cfg.grid_points = require<int>(doc, "P");
    cfg.particles = optional_or<int>(doc, "N", 1);
    cfg.coupling = require<double>(doc, "g");
    cfg.schedule = require<std::vector<double>>(doc, "schedule");
    cfg.budget = optional_or<std::size_t>(doc, "budget", 5000);
    cfg.validate();
    return cfg;
  }
  if (model == "scan") {
    reject_unknown_keys(doc, {"model", "mode", "dim", "target_dim", "indices"});
    ScanConfig cfg;
    cfg.mode = optional_or<std::string>(doc, "mode", cfg.mode);
    if (cfg.mode != "exact" && cfg.mode != "grisem" && cfg.mode != "shrinking")
      throw config_error("config: bad value for key \"mode\"");
    cfg.dim = optional_or<int>(doc, "dim", cfg.dim);
    cfg.target_dim = optional_or<int>(doc, "target_dim", cfg.target_dim);
    cfg.indices = optional_or<std::vector<double>>(doc, "indices", cfg.indices);
    if (cfg.dim < 2 || cfg.target_dim < 1 || cfg.indices.empty())
      throw config_error("config: bad value for key \"dim\"");
    return cfg;
  }
  throw config_error("config: unknown model \"" + model + "\"");
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_config(buf.str());
}

}  // namespace kreinforge
