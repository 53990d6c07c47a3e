#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "grace/model.hpp"
#include "grace/sample.hpp"
#include "grace/train.hpp"

namespace grace::harness {

struct EvalConfig {
  std::vector<double> mask_ratios = {0.0, 0.1, 0.2, 0.3, 0.4,
                                     0.5, 0.6, 0.7, 0.8};
  std::vector<MaskMode> mask_modes = {MaskMode::background, MaskMode::black};
};

/// Full experiment description: generator, model, training protocol, dataset
/// size and evaluation grid. One master seed drives data generation,
/// initialization and training unless the config pins train.seed itself.
struct ExperimentConfig {
  GeneratorConfig generator;
  ModelHyper model;
  TrainConfig train;
  int num_samples = 500;
  EvalConfig eval;
  std::uint64_t seed = 42;

  /// Desk-scale defaults: d = 16*4*4 = 256 nodes, g_dim 32, n_out 64,
  /// shortened schedule. Paper-scale values remain valid config inputs.
  static ExperimentConfig desk_default();

  void validate() const;
  void set_master_seed(std::uint64_t s);  // also retargets train.seed
};

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

/// FNV-1a hash of the canonical serialized config; stamped into every report
/// so any row can be regenerated exactly.
std::string config_fingerprint(const ExperimentConfig& cfg);

}  // namespace grace::harness
