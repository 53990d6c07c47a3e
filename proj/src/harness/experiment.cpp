#include "grace/harness/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "grace/convergence.hpp"
#include "grace/eigen.hpp"
#include "grace/entanglement.hpp"
#include "grace/feature_context.hpp"
#include "grace/harness/checkpoint.hpp"
#include "grace/harness/io.hpp"
#include "grace/numformat.hpp"
#include "grace/rng.hpp"

namespace grace::harness {

namespace {

constexpr std::uint64_t kModelInitStream = 0x10D31;
constexpr std::uint64_t kBaselineInitStream = 0xBA5E;
constexpr std::uint64_t kAuditSampleStream = 0xA0D17;

std::string path_join(const std::string& dir, const char* file) {
  return dir + "/" + file;
}

Matrix seeded_gaussian(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

nlohmann::json eval_row(const std::string& model_name,
                        const std::string& ablation, double m_r, MaskMode mode,
                        const EvalMetrics& m, std::uint64_t seed) {
  nlohmann::json row = metrics_to_json(m);
  row["model"] = model_name;
  row["ablation"] = ablation;
  row["m_r"] = m_r;
  row["mask_mode"] = mask_mode_name(mode);
  row["seed"] = seed;
  return row;
}

double mean_feature_l1(const GraceModel& model,
                       const std::vector<SequenceSample>& samples) {
  double total = 0.0;
  for (const SequenceSample& s : samples)
    total += abs_sum(
        assemble_features(s, model.projector, model.projector_bias));
  return total / static_cast<double>(samples.size());
}

void check_checkpoint_compatible(const ExperimentConfig& cfg,
                                 const nlohmann::json& checkpoint) {
  const nlohmann::json current = to_json(cfg);
  const nlohmann::json& stored = checkpoint.at("config");
  if (current.at("model") != stored.at("model") ||
      current.at("generator") != stored.at("generator"))
    throw std::runtime_error(
        "checkpoint was produced under a different model/generator config");
}

}  // namespace

nlohmann::json run_gen_data(const ExperimentConfig& cfg,
                            const std::string& out_dir) {
  nlohmann::json manifest = make_manifest(cfg);
  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    write_json_file(path_join(out_dir, kManifestFile), manifest);
  }
  return manifest;
}

std::string trace_to_csv(const TrainResult& result) {
  std::string csv = "epoch,train_loss,val_accuracy,optimizer_steps\n";
  for (const EpochStats& e : result.trace) {
    csv += std::to_string(e.epoch);
    csv += ",";
    csv += fmt_double(e.train_loss);
    csv += ",";
    csv += fmt_double(e.val_accuracy);
    csv += ",";
    csv += std::to_string(e.optimizer_steps);
    csv += "\n";
  }
  return csv;
}

std::string sweep_rows_to_csv(const nlohmann::json& report) {
  std::string csv =
      "model,ablation,m_r,mask_mode,accuracy,macro_f1,auc,n_samples,seed\n";
  for (const auto& row : report.at("rows")) {
    csv += row.at("model").get<std::string>();
    csv += ",";
    csv += row.at("ablation").get<std::string>();
    csv += ",";
    csv += fmt_double(row.at("m_r").get<double>());
    csv += ",";
    csv += row.at("mask_mode").get<std::string>();
    csv += ",";
    csv += fmt_double(row.at("accuracy").get<double>());
    csv += ",";
    csv += fmt_double(row.at("macro_f1").get<double>());
    csv += ",";
    csv += row.at("auc").is_null() ? std::string()
                                   : fmt_double(row.at("auc").get<double>());
    csv += ",";
    csv += std::to_string(row.at("n_samples").get<int>());
    csv += ",";
    csv += std::to_string(row.at("seed").get<std::uint64_t>());
    csv += "\n";
  }
  return csv;
}

TrainRun run_train(const ExperimentConfig& cfg, const nlohmann::json& manifest,
                   const std::string& out_dir,
                   const nlohmann::json* resume_checkpoint) {
  cfg.validate();
  const auto train_set = materialize_split(manifest, "train");
  const auto val_set = materialize_split(manifest, "val");
  const auto test_set = materialize_split(manifest, "test");

  TrainRun run;
  int start_epoch = 0;
  if (resume_checkpoint) {
    check_checkpoint_compatible(cfg, *resume_checkpoint);
    CheckpointContents contents = checkpoint_from_json(*resume_checkpoint);
    run.model = std::move(contents.model);
    run.adam = std::move(contents.adam);
    start_epoch = contents.epochs_done;
  } else {
    run.model =
        GraceModel::init(cfg.model, mix_seed(cfg.train.seed, kModelInitStream));
    TrainableModel t = make_trainable(run.model);
    run.adam = AdamState::zeros_like(t.params);
  }

  TrainableModel trainable = make_trainable(run.model);
  run.trace = train_model(trainable, train_set, val_set, cfg.train, run.adam,
                          start_epoch);
  run.final_test = evaluate(run.model, test_set, 0.0, cfg.generator.mask_mode);
  run.final_feature_l1 = mean_feature_l1(run.model, train_set);
  run.checkpoint = checkpoint_to_json(run.model, run.adam, cfg.train.epochs,
                                      cfg, run.final_test,
                                      run.final_feature_l1);
  run.report = nlohmann::json{
      {"schema", "grace.train_report.v1"},
      {"seed", cfg.seed},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"ablation", cfg.model.ablation_label()},
      {"epochs", cfg.train.epochs},
      {"final_test", metrics_to_json(run.final_test)},
      {"final_feature_l1", run.final_feature_l1},
  };

  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    write_json_file(path_join(out_dir, kCheckpointFile), run.checkpoint);
    write_text_file(path_join(out_dir, kTraceFile), trace_to_csv(run.trace));
    write_json_file(path_join(out_dir, kTrainReportFile), run.report);
  }
  return run;
}

nlohmann::json run_sweep(const ExperimentConfig& cfg,
                         const nlohmann::json& manifest,
                         const nlohmann::json& checkpoint,
                         const std::string& out_dir) {
  cfg.validate();
  check_checkpoint_compatible(cfg, checkpoint);
  GraceModel model = checkpoint_from_json(checkpoint).model;
  const std::string ablation = model.hyper.ablation_label();

  const auto train_set = materialize_split(manifest, "train");
  const auto val_set = materialize_split(manifest, "val");
  const auto test_set = materialize_split(manifest, "test");

  // comparison head, trained fresh under the same protocol
  BaselineModel baseline = BaselineModel::init(
      cfg.model.channels_in, cfg.model.channels,
      mix_seed(cfg.train.seed, kBaselineInitStream));
  train(baseline, train_set, val_set, cfg.train);

  nlohmann::json rows = nlohmann::json::array();
  for (double m_r : cfg.eval.mask_ratios) {
    for (MaskMode mode : cfg.eval.mask_modes) {
      rows.push_back(eval_row("grace", ablation, m_r, mode,
                              evaluate(model, test_set, m_r, mode), cfg.seed));
      rows.push_back(eval_row("baseline", "baseline", m_r, mode,
                              evaluate(baseline, test_set, m_r, mode),
                              cfg.seed));
    }
  }

  nlohmann::json report{
      {"schema", "grace.sweep_report.v1"},
      {"seed", cfg.seed},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"ablation", ablation},
      {"rows", rows},
  };
  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    write_json_file(path_join(out_dir, kSweepReportFile), report);
    write_text_file(path_join(out_dir, kSweepCsvFile),
                    sweep_rows_to_csv(report));
  }
  return report;
}

nlohmann::json run_hyper_sweep(const ExperimentConfig& cfg,
                               const std::string& axis,
                               const std::vector<double>& values,
                               const std::string& out_dir) {
  if (values.empty())
    throw std::invalid_argument("hyper-sweep: no values given");

  nlohmann::json rows = nlohmann::json::array();
  for (double value : values) {
    ExperimentConfig point = cfg;
    if (axis == "N")
      point.generator.frames = static_cast<int>(value);
    else if (axis == "g_n")
      point.model.gcn_layers = static_cast<int>(value);
    else if (axis == "alpha")
      point.model.sparsity_alpha = value;
    else if (axis == "g_dim")
      point.model.gcn_dim = static_cast<int>(value);
    else if (axis == "n_out")
      point.model.readout_dim = static_cast<int>(value);
    else
      throw std::invalid_argument(
          "hyper-sweep: unknown axis '" + axis +
          "' (expected N, g_n, alpha, g_dim or n_out)");
    point.validate();

    nlohmann::json manifest = make_manifest(point);
    TrainRun trained = run_train(point, manifest, "");
    const auto test_set = materialize_split(manifest, "test");
    for (double m_r : point.eval.mask_ratios) {
      for (MaskMode mode : point.eval.mask_modes) {
        nlohmann::json row =
            eval_row("grace", point.model.ablation_label(), m_r, mode,
                     evaluate(trained.model, test_set, m_r, mode), point.seed);
        row["axis"] = axis;
        row["value"] = value;
        row["final_feature_l1"] = trained.final_feature_l1;
        rows.push_back(row);
      }
    }
  }

  nlohmann::json report{
      {"schema", "grace.hyper_report.v1"},
      {"seed", cfg.seed},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"axis", axis},
      {"rows", rows},
  };
  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    write_json_file(path_join(out_dir, kHyperReportFile), report);
    std::string csv =
        "axis,value,model,ablation,m_r,mask_mode,accuracy,macro_f1,auc,"
        "n_samples,seed,final_feature_l1\n";
    for (const auto& row : rows) {
      csv += axis;
      csv += ",";
      csv += fmt_double(row.at("value").get<double>());
      csv += ",";
      csv += row.at("model").get<std::string>();
      csv += ",";
      csv += row.at("ablation").get<std::string>();
      csv += ",";
      csv += fmt_double(row.at("m_r").get<double>());
      csv += ",";
      csv += row.at("mask_mode").get<std::string>();
      csv += ",";
      csv += fmt_double(row.at("accuracy").get<double>());
      csv += ",";
      csv += fmt_double(row.at("macro_f1").get<double>());
      csv += ",";
      csv += row.at("auc").is_null()
                 ? std::string()
                 : fmt_double(row.at("auc").get<double>());
      csv += ",";
      csv += std::to_string(row.at("n_samples").get<int>());
      csv += ",";
      csv += std::to_string(row.at("seed").get<std::uint64_t>());
      csv += ",";
      csv += fmt_double(row.at("final_feature_l1").get<double>());
      csv += "\n";
    }
    write_text_file(path_join(out_dir, kHyperCsvFile), csv);
  }
  return report;
}

nlohmann::json run_audit(const ExperimentConfig& cfg,
                         const nlohmann::json* checkpoint,
                         const std::string& out_dir) {
  cfg.validate();
  GraceModel model =
      checkpoint ? checkpoint_from_json(*checkpoint).model
                 : GraceModel::init(cfg.model,
                                    mix_seed(cfg.train.seed, kModelInitStream));

  SequenceSample sample = generate_sample(
      cfg.generator, 1, mix_seed(cfg.seed, kAuditSampleStream));
  Matrix features =
      assemble_features(sample, model.projector, model.projector_bias);
  EntangledGraph graph = build_graph(features, cfg.model.threshold_q);

  TheoremAudit assumptions = audit_assumptions(graph, model.gcn_weights);

  // Contractive-regime iteration demo: take a square GCN weight rescaled to
  // spectral norm 0.8 so the trace shows the Theorem-1 geometric decay even
  // when the raw model weights are not contractive.
  Matrix demo_weight;
  for (const Matrix& w : model.gcn_weights)
    if (w.rows() == w.cols()) {
      demo_weight = w;
      break;
    }
  if (demo_weight.empty())
    demo_weight = seeded_gaussian(cfg.model.gcn_dim, cfg.model.gcn_dim,
                                  mix_seed(cfg.seed, 0xDE30));
  const double norm = spectral_norm(demo_weight);
  const double target_norm = 0.8;
  if (norm > 0.0) demo_weight = scale(demo_weight, target_norm / norm);
  Matrix z0 = seeded_gaussian(graph.node_count(), demo_weight.rows(),
                              mix_seed(cfg.seed, 0x20D0));
  TheoremAudit contraction = measure_contraction(graph, demo_weight, z0, 300);

  Matrix signal = seeded_gaussian(graph.node_count(), 1,
                                  mix_seed(cfg.seed, 0x516A));
  SmoothingReport smoothing = smoothing_audit(graph, signal);

  double max_ratio = 0.0;
  for (double r : contraction.ratios) max_ratio = std::max(max_ratio, r);
  nlohmann::json bands = nlohmann::json::array();
  for (const SmoothingBand& b : smoothing.bands)
    bands.push_back({{"eigenvalue", b.eigenvalue},
                     {"energy_in", b.energy_in},
                     {"energy_out", b.energy_out}});

  nlohmann::json report{
      {"schema", "grace.audit_report.v1"},
      {"seed", cfg.seed},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"spectral", spectral_certificate(graph)},
      {"assumptions",
       {{"lambda_max_propagator", assumptions.lambda_max_propagator},
        {"lnorm_min", assumptions.lnorm_min},
        {"lnorm_max", assumptions.lnorm_max},
        {"interval_ok", assumptions.interval_ok},
        {"weight_bound", assumptions.weight_bound},
        {"lipschitz_sigma", assumptions.lipschitz_sigma},
        {"lipschitz_total", assumptions.lipschitz_total},
        {"lipschitz_loose", assumptions.lipschitz_loose},
        {"contractive", assumptions.contractive}}},
      {"contraction",
       {{"weight_spectral_norm", target_norm},
        {"lipschitz_total", contraction.lipschitz_total},
        {"contractive", contraction.contractive},
        {"fixed_point_converged", contraction.fixed_point_converged},
        {"fixed_point_iterations", contraction.fixed_point_iterations},
        {"geometric_bound_ok", contraction.geometric_bound_ok},
        {"max_ratio", max_ratio},
        {"residuals", contraction.residuals},
        {"ratios", contraction.ratios}}},
      {"smoothing",
       {{"bands", bands},
        {"total_energy_in", smoothing.total_energy_in},
        {"total_energy_out", smoothing.total_energy_out},
        {"max_identity_error", smoothing.max_identity_error},
        {"max_band_error", smoothing.max_band_error}}},
  };

  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    write_json_file(path_join(out_dir, kAuditReportFile), report);
    std::string csv = "step,residual,ratio\n";
    for (std::size_t i = 0; i < contraction.residuals.size(); ++i) {
      csv += std::to_string(i);
      csv += ",";
      csv += fmt_double(contraction.residuals[i]);
      csv += ",";
      if (i < contraction.ratios.size()) csv += fmt_double(contraction.ratios[i]);
      csv += "\n";
    }
    write_text_file(path_join(out_dir, kContractionTraceFile), csv);
  }
  return report;
}

}  // namespace grace::harness
