#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kreinforge/models/delta_well.hpp"
#include "kreinforge/models/nelson.hpp"

namespace kreinforge {

// Scan configuration: a seeded random single-stage instance driven through a
// regular-perturbation schedule.
struct ScanConfig {
  std::string mode = "shrinking";  // exact | grisem | shrinking
  int dim = 8;
  int target_dim = 3;
  std::vector<double> indices = {1, 2, 4, 8, 16, 32, 64, 128};
};

using ModelConfig = std::variant<std::monostate, Delta1DConfig,
                                 NelsonTruncConfig, ScanConfig>;

struct RunConfig {
  std::string command;  // check | scan | delta1d | nelson
  std::uint64_t seed = 20250809;
  std::optional<double> tolerance;
  std::string out_dir = ".";
  std::vector<Complex> z_points;  // optional override
  int jobs = 0;                   // 0: resolve via KREIN_FORGE_JOBS, else 1
  bool inject_defect = false;
  ModelConfig model;
};

// Strict parser for the model document: {"model": "delta1d"|"nelson"|"scan",
// ...}.  Unknown or missing keys raise config_error naming the key.
ModelConfig parse_model_config(const std::string& json_text);
ModelConfig load_model_config(const std::string& path);

}  // namespace kreinforge
