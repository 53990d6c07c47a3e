#include "grace/model.hpp"

#include <cmath>
#include <stdexcept>

#include "grace/feature_context.hpp"
#include "grace/rng.hpp"

namespace grace {

namespace {

// Glorot-uniform in +-sqrt(6 / (fan_in + fan_out)).
Matrix glorot(int rows, int cols, Rng& rng) {
  double bound = std::sqrt(6.0 / (rows + cols));
  Matrix w(rows, cols);
  for (std::size_t i = 0; i < w.size(); ++i)
    w.data()[i] = (2.0 * rng.uniform() - 1.0) * bound;
  return w;
}

Var mean_rows_pool(Tape& tape, Var z) {
  const Matrix& v = tape.value(z);
  Var ones = tape.constant(Matrix::constant(1, v.rows(), 1.0));
  return tape.scale(tape.matmul(ones, z), 1.0 / v.rows());
}

}  // namespace

void ModelHyper::validate() const {
  if (channels_in < 1 || channels < 1 || gcn_layers < 1 || gcn_dim < 1 ||
      readout_dim < 1)
    throw std::invalid_argument("ModelHyper: dimensions must be >= 1");
  if (classes != 2)
    throw std::invalid_argument("ModelHyper: this head is binary (classes=2)");
  if (!(threshold_q > 0.0))
    throw std::invalid_argument("ModelHyper: threshold_q must be > 0");
  if (sparsity_alpha < 0.0)
    throw std::invalid_argument("ModelHyper: sparsity_alpha must be >= 0");
}

std::string ModelHyper::ablation_label() const {
  std::string label = "gcn";
  if (glspr) label += "+glspr";
  if (sparsity_constraint) label += "+sc";
  return label;
}

GraceModel GraceModel::init(const ModelHyper& hyper, std::uint64_t seed) {
  hyper.validate();
  GraceModel m;
  m.hyper = hyper;
  Rng rng(mix_seed(seed, 0x1417));
  m.projector = glorot(hyper.channels_in, hyper.channels, rng);
  m.projector_bias = Matrix(1, hyper.channels);
  m.gcn_weights.push_back(glorot(hyper.channels, hyper.gcn_dim, rng));
  for (int l = 1; l < hyper.gcn_layers; ++l)
    m.gcn_weights.push_back(glorot(hyper.gcn_dim, hyper.gcn_dim, rng));
  m.readout_weight = glorot(hyper.gcn_dim, hyper.readout_dim, rng);
  m.classifier_weight = glorot(hyper.readout_dim, hyper.classes, rng);
  return m;
}

std::vector<Matrix*> GraceModel::parameters() {
  std::vector<Matrix*> p{&projector, &projector_bias};
  for (Matrix& w : gcn_weights) p.push_back(&w);
  p.push_back(&readout_weight);
  p.push_back(&classifier_weight);
  return p;
}

std::vector<const Matrix*> GraceModel::parameters() const {
  std::vector<const Matrix*> p{&projector, &projector_bias};
  for (const Matrix& w : gcn_weights) p.push_back(&w);
  p.push_back(&readout_weight);
  p.push_back(&classifier_weight);
  return p;
}

std::vector<std::string> GraceModel::parameter_names() const {
  std::vector<std::string> names{"projector", "projector_bias"};
  for (std::size_t l = 0; l < gcn_weights.size(); ++l)
    names.push_back("gcn_" + std::to_string(l));
  names.push_back("readout");
  names.push_back("classifier");
  return names;
}

Matrix gcn_layer(const Matrix& prop, const Matrix& z, const Matrix& w) {
  return relu(matmul(matmul(prop, z), w));
}

Var gcn_layer(Tape& tape, Var prop, Var z, Var w) {
  return tape.relu(tape.matmul(tape.matmul(prop, z), w));
}

std::vector<Var> ModelVars::all() const {
  std::vector<Var> v{projector, bias};
  v.insert(v.end(), gcn.begin(), gcn.end());
  v.push_back(readout);
  v.push_back(classifier);
  return v;
}

ModelVars bind_model(Tape& tape, const GraceModel& model) {
  ModelVars v;
  v.projector = tape.input(model.projector);
  v.bias = tape.input(model.projector_bias);
  for (const Matrix& w : model.gcn_weights) v.gcn.push_back(tape.input(w));
  v.readout = tape.input(model.readout_weight);
  v.classifier = tape.input(model.classifier_weight);
  return v;
}

ForwardVars forward_on_tape(Tape& tape, const ModelVars& vars,
                            const ModelHyper& hyper,
                            const SequenceSample& sample) {
  ForwardVars fwd;
  fwd.features = assemble_features(tape, sample, vars.projector, vars.bias);
  GraphVars graph = build_graph_on_tape(tape, fwd.features, hyper.threshold_q);
  // ablated propagation keeps the raw self-looped adjacency
  Var prop = hyper.glspr ? graph.propagator : graph.adjacency_loops;

  Var z = fwd.features;
  for (Var w : vars.gcn) z = gcn_layer(tape, prop, z, w);

  Var pooled = mean_rows_pool(tape, z);
  Var readout = tape.relu(tape.matmul(pooled, vars.readout));
  fwd.logits = tape.matmul(readout, vars.classifier);
  fwd.probabilities = tape.softmax_row(fwd.logits);
  return fwd;
}

Var loss_on_tape(Tape& tape, const ForwardVars& fwd, int label,
                 const ModelHyper& hyper) {
  if (label != 0 && label != 1)
    throw std::invalid_argument("loss: label must be 0 or 1");
  Matrix one_hot(1, hyper.classes);
  one_hot(0, label) = 1.0;
  Var y = tape.constant(one_hot);
  Var log_probs = tape.log_floored(fwd.probabilities, kProbabilityFloor);
  Var ce = tape.scale(tape.sum_all(tape.hadamard(y, log_probs)), -1.0);
  if (!hyper.sparsity_constraint || hyper.sparsity_alpha == 0.0) return ce;
  Var sparsity = tape.scale(tape.sum_all(tape.abs(fwd.features)),
                            hyper.sparsity_alpha);
  return tape.add(ce, sparsity);
}

Prediction predict(const GraceModel& model, const SequenceSample& sample) {
  Tape tape;
  ModelVars vars = bind_model(tape, model);
  ForwardVars fwd = forward_on_tape(tape, vars, model.hyper, sample);
  Prediction p;
  p.probabilities = tape.value(fwd.probabilities).values();
  p.logits = tape.value(fwd.logits).values();
  return p;
}

double loss_value(const GraceModel& model, const SequenceSample& sample,
                  int label) {
  Tape tape;
  ModelVars vars = bind_model(tape, model);
  ForwardVars fwd = forward_on_tape(tape, vars, model.hyper, sample);
  Var loss = loss_on_tape(tape, fwd, label, model.hyper);
  return tape.value(loss)(0, 0);
}

BaselineModel BaselineModel::init(int channels_in, int channels,
                                  std::uint64_t seed) {
  BaselineModel m;
  m.channels_in = channels_in;
  m.channels = channels;
  Rng rng(mix_seed(seed, 0x6A5E));
  m.projector = glorot(channels_in, channels, rng);
  m.projector_bias = Matrix(1, channels);
  m.classifier_weight = glorot(channels, 2, rng);
  return m;
}

std::vector<Matrix*> BaselineModel::parameters() {
  return {&projector, &projector_bias, &classifier_weight};
}

Var baseline_loss_on_tape(Tape& tape, const std::vector<Var>& params,
                          const SequenceSample& sample, int label) {
  Var x = assemble_features(tape, sample, params[0], params[1]);
  Var pooled = mean_rows_pool(tape, x);
  Var logits = tape.matmul(pooled, params[2]);
  Var probs = tape.softmax_row(logits);
  Matrix one_hot(1, 2);
  one_hot(0, label) = 1.0;
  Var y = tape.constant(one_hot);
  Var log_probs = tape.log_floored(probs, kProbabilityFloor);
  return tape.scale(tape.sum_all(tape.hadamard(y, log_probs)), -1.0);
}

Prediction baseline_predict(const BaselineModel& model,
                            const SequenceSample& sample) {
  Matrix x = assemble_features(sample, model.projector, model.projector_bias);
  Matrix pooled(1, x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) pooled(0, j) += x(i, j);
  pooled = scale(pooled, 1.0 / x.rows());
  Matrix logits = matmul(pooled, model.classifier_weight);
  Prediction p;
  p.logits = logits.values();
  double mx = std::max(logits(0, 0), logits(0, 1));
  double e0 = std::exp(logits(0, 0) - mx);
  double e1 = std::exp(logits(0, 1) - mx);
  p.probabilities = {e0 / (e0 + e1), e1 / (e0 + e1)};
  return p;
}

}  // namespace grace
