#pragma once

#include "json.hpp"

#include "grace/harness/config.hpp"
#include "grace/metrics.hpp"
#include "grace/model.hpp"
#include "grace/train.hpp"

namespace grace::harness {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// Versioned JSON checkpoint: hyperparameters, weights, optimizer state and
/// the epoch count, plus the final clean-test metrics. Numbers round-trip
/// exactly (shortest-representation doubles), so resuming reproduces an
/// uninterrupted run bit for bit.
nlohmann::json checkpoint_to_json(const GraceModel& model,
                                  const AdamState& adam, int epochs_done,
                                  const ExperimentConfig& cfg,
                                  const EvalMetrics& final_test,
                                  double final_feature_l1);

struct CheckpointContents {
  GraceModel model;
  AdamState adam;
  int epochs_done = 0;
};

CheckpointContents checkpoint_from_json(const nlohmann::json& j);

nlohmann::json metrics_to_json(const EvalMetrics& m);

}  // namespace grace::harness
