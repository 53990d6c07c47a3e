#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "grace/harness/config.hpp"
#include "grace/harness/manifest.hpp"
#include "grace/metrics.hpp"
#include "grace/model.hpp"
#include "grace/train.hpp"

namespace grace::harness {

// File names written under the --out directory.
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kCheckpointFile = "checkpoint.json";
inline constexpr const char* kTraceFile = "trace.csv";
inline constexpr const char* kTrainReportFile = "train_report.json";
inline constexpr const char* kSweepReportFile = "sweep_report.json";
inline constexpr const char* kSweepCsvFile = "sweep_report.csv";
inline constexpr const char* kHyperReportFile = "hyper_report.json";
inline constexpr const char* kHyperCsvFile = "hyper_report.csv";
inline constexpr const char* kAuditReportFile = "audit_report.json";
inline constexpr const char* kContractionTraceFile = "contraction_trace.csv";

/// Generates the dataset manifest (8:1:1 stratified split, balanced labels)
/// and writes it when out_dir is nonempty.
nlohmann::json run_gen_data(const ExperimentConfig& cfg,
                            const std::string& out_dir);

struct TrainRun {
  GraceModel model;
  AdamState adam;
  TrainResult trace;
  EvalMetrics final_test;      // clean test split, m_r = 0
  double final_feature_l1 = 0.0;  // mean |X|_1 over the train split
  nlohmann::json checkpoint;
  nlohmann::json report;
};

/// Trains GRACE per the config (optionally resuming from a checkpoint) and
/// writes checkpoint, trace CSV and train report when out_dir is nonempty.
TrainRun run_train(const ExperimentConfig& cfg, const nlohmann::json& manifest,
                   const std::string& out_dir,
                   const nlohmann::json* resume_checkpoint = nullptr);

/// Masking-ratio robustness sweep of the checkpointed model over the eval
/// grid, against the mean-pool baseline trained under the same protocol.
nlohmann::json run_sweep(const ExperimentConfig& cfg,
                         const nlohmann::json& manifest,
                         const nlohmann::json& checkpoint,
                         const std::string& out_dir);

/// Re-runs gen/train/sweep per value of one hyperparameter axis
/// (N, g_n, alpha, g_dim, n_out).
nlohmann::json run_hyper_sweep(const ExperimentConfig& cfg,
                               const std::string& axis,
                               const std::vector<double>& values,
                               const std::string& out_dir);

/// Spectral certificate, Theorem-1 assumption audit, a contractive-regime
/// iteration trace and the smoothing audit on a seeded sample graph.
nlohmann::json run_audit(const ExperimentConfig& cfg,
                         const nlohmann::json* checkpoint,
                         const std::string& out_dir);

std::string trace_to_csv(const TrainResult& result);
std::string sweep_rows_to_csv(const nlohmann::json& report);

}  // namespace grace::harness
