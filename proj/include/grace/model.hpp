#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grace/entanglement.hpp"
#include "grace/matrix.hpp"
#include "grace/sample.hpp"
#include "grace/tape.hpp"

namespace grace {

struct ModelHyper {
  int channels_in = 8;
  int channels = 8;       // projected feature width c
  int gcn_layers = 8;     // g_n
  int gcn_dim = 32;       // g_dim
  int readout_dim = 64;   // n_out
  int classes = 2;
  double threshold_q = 0.5;
  double sparsity_alpha = 1e-5;
  bool glspr = true;              // degree-normalized propagation
  bool sparsity_constraint = true;

  void validate() const;
  std::string ablation_label() const;  // "gcn", "gcn+glspr", ...
};

/// Projector, GCN stack, readout and classifier weights.
struct GraceModel {
  ModelHyper hyper;
  Matrix projector;        // c_in x c
  Matrix projector_bias;   // 1 x c
  std::vector<Matrix> gcn_weights;  // [0]: c x g_dim, rest g_dim x g_dim
  Matrix readout_weight;   // g_dim x n_out
  Matrix classifier_weight;  // n_out x classes

  static GraceModel init(const ModelHyper& hyper, std::uint64_t seed);
  std::vector<Matrix*> parameters();
  std::vector<const Matrix*> parameters() const;
  std::vector<std::string> parameter_names() const;
};

struct Prediction {
  std::vector<double> probabilities;
  std::vector<double> logits;
  double fake_score() const { return probabilities[1]; }
};

/// One GCN layer: sigma(prop * z * w) with sigma = max(0, .).
Matrix gcn_layer(const Matrix& prop, const Matrix& z, const Matrix& w);
Var gcn_layer(Tape& tape, Var prop, Var z, Var w);

/// Parameter leaves of a model on a tape, in parameters() order.
struct ModelVars {
  Var projector;
  Var bias;
  std::vector<Var> gcn;
  Var readout;
  Var classifier;
  std::vector<Var> all() const;
};

ModelVars bind_model(Tape& tape, const GraceModel& model);

struct ForwardVars {
  Var features;       // assembled feature context X
  Var logits;         // 1 x classes
  Var probabilities;  // softmax row
};

ForwardVars forward_on_tape(Tape& tape, const ModelVars& vars,
                            const ModelHyper& hyper,
                            const SequenceSample& sample);

/// Cross-entropy against the one-hot label plus alpha * |X|_1 when the
/// sparsity constraint is enabled. Probabilities are floored at 1e-12.
Var loss_on_tape(Tape& tape, const ForwardVars& fwd, int label,
                 const ModelHyper& hyper);

Prediction predict(const GraceModel& model, const SequenceSample& sample);
double loss_value(const GraceModel& model, const SequenceSample& sample,
                  int label);

/// Mean-pool comparison head: projected features averaged over all nodes,
/// then one affine classifier. Trained under the same protocol as GRACE for
/// the robustness-degradation comparison.
struct BaselineModel {
  int channels_in = 8;
  int channels = 8;
  Matrix projector;
  Matrix projector_bias;
  Matrix classifier_weight;  // c x 2

  static BaselineModel init(int channels_in, int channels, std::uint64_t seed);
  std::vector<Matrix*> parameters();
};

Var baseline_loss_on_tape(Tape& tape, const std::vector<Var>& params,
                          const SequenceSample& sample, int label);
Prediction baseline_predict(const BaselineModel& model,
                            const SequenceSample& sample);

constexpr double kProbabilityFloor = 1e-12;

}  // namespace grace
