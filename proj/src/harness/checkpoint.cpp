#include "grace/harness/checkpoint.hpp"

#include <stdexcept>

namespace grace::harness {

nlohmann::json matrix_to_json(const Matrix& m) {
  return nlohmann::json{
      {"rows", m.rows()}, {"cols", m.cols()}, {"data", m.values()}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  return Matrix(j.at("rows").get<int>(), j.at("cols").get<int>(),
                j.at("data").get<std::vector<double>>());
}

nlohmann::json metrics_to_json(const EvalMetrics& m) {
  nlohmann::json j{{"accuracy", m.accuracy},
                   {"macro_f1", m.macro_f1},
                   {"n_samples", m.n_samples}};
  if (m.auc)
    j["auc"] = *m.auc;
  else
    j["auc"] = nullptr;
  return j;
}

nlohmann::json checkpoint_to_json(const GraceModel& model,
                                  const AdamState& adam, int epochs_done,
                                  const ExperimentConfig& cfg,
                                  const EvalMetrics& final_test,
                                  double final_feature_l1) {
  nlohmann::json weights, adam_m, adam_v;
  const auto names = model.parameter_names();
  const auto params = model.parameters();
  for (std::size_t k = 0; k < params.size(); ++k) {
    weights[names[k]] = matrix_to_json(*params[k]);
    adam_m[names[k]] = matrix_to_json(adam.m[k]);
    adam_v[names[k]] = matrix_to_json(adam.v[k]);
  }
  return nlohmann::json{
      {"schema", "grace.checkpoint.v1"},
      {"epochs_done", epochs_done},
      {"ablation", model.hyper.ablation_label()},
      {"config", to_json(cfg)},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"weights", weights},
      {"adam", {{"step", adam.step}, {"m", adam_m}, {"v", adam_v}}},
      {"final_test", metrics_to_json(final_test)},
      {"final_feature_l1", final_feature_l1},
  };
}

CheckpointContents checkpoint_from_json(const nlohmann::json& j) {
  if (j.at("schema").get<std::string>() != "grace.checkpoint.v1")
    throw std::runtime_error("unsupported checkpoint schema");

  ExperimentConfig cfg = config_from_json(j.at("config"));
  CheckpointContents out;
  out.epochs_done = j.at("epochs_done").get<int>();
  out.model.hyper = cfg.model;

  const auto& w = j.at("weights");
  out.model.projector = matrix_from_json(w.at("projector"));
  out.model.projector_bias = matrix_from_json(w.at("projector_bias"));
  for (int l = 0; l < cfg.model.gcn_layers; ++l)
    out.model.gcn_weights.push_back(
        matrix_from_json(w.at("gcn_" + std::to_string(l))));
  out.model.readout_weight = matrix_from_json(w.at("readout"));
  out.model.classifier_weight = matrix_from_json(w.at("classifier"));

  const auto& adam = j.at("adam");
  out.adam.step = adam.at("step").get<long>();
  const auto names = out.model.parameter_names();
  for (const std::string& name : names) {
    out.adam.m.push_back(matrix_from_json(adam.at("m").at(name)));
    out.adam.v.push_back(matrix_from_json(adam.at("v").at(name)));
  }
  return out;
}

}  // namespace grace::harness
