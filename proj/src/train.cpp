#include "grace/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "grace/kernels.hpp"
#include "grace/numformat.hpp"
#include "grace/rng.hpp"

namespace grace {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;
constexpr std::uint64_t kShuffleStream = 0x5F0FF1E;
constexpr std::uint64_t kTrainMaskStream = 0x7A51C;

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0))
    throw std::invalid_argument("TrainConfig: learning_rate must be >= 0");
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (batch_size < 1)
    throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  if (decay_every < 1)
    throw std::invalid_argument("TrainConfig: decay_every must be >= 1");
  if (!(train_mask_ratio >= 0.0 && train_mask_ratio <= 1.0))
    throw std::invalid_argument("TrainConfig: train_mask_ratio in [0,1]");
}

double TrainConfig::learning_rate_at(int epoch) const {
  return learning_rate * std::pow(decay_factor, epoch / decay_every);
}

AdamState AdamState::zeros_like(const std::vector<Matrix*>& params) {
  AdamState s;
  for (const Matrix* p : params) {
    s.m.emplace_back(p->rows(), p->cols());
    s.v.emplace_back(p->rows(), p->cols());
  }
  return s;
}

void adam_update(std::vector<Matrix*>& params,
                 const std::vector<Matrix>& grads, AdamState& state,
                 double learning_rate) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam_update: mismatched parameter lists");
  ++state.step;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k];
    const Matrix& g = grads[k];
    Matrix& m = state.m[k];
    Matrix& v = state.v[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g.data()[i];
      m.data()[i] = kBeta1 * m.data()[i] + (1.0 - kBeta1) * gi;
      v.data()[i] = kBeta2 * v.data()[i] + (1.0 - kBeta2) * gi * gi;
      const double mhat = m.data()[i] / bc1;
      const double vhat = v.data()[i] / bc2;
      p.data()[i] -= learning_rate * mhat / (std::sqrt(vhat) + kEps);
    }
  }
}

TrainResult train_model(TrainableModel& model,
                        const std::vector<SequenceSample>& train_set,
                        const std::vector<SequenceSample>& val_set,
                        const TrainConfig& cfg, AdamState& adam,
                        int start_epoch) {
  cfg.validate();
  if (train_set.empty())
    throw std::invalid_argument("train: training set is empty");

  const int n = static_cast<int>(train_set.size());
  TrainResult result;

  for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(mix_seed(mix_seed(cfg.seed, kShuffleStream),
                             static_cast<std::uint64_t>(epoch)));
    for (int i = n - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);

    const double lr = cfg.learning_rate_at(epoch);
    double loss_sum = 0.0;

    for (int batch_start = 0; batch_start < n;
         batch_start += cfg.batch_size) {
      const int batch_end = std::min(n, batch_start + cfg.batch_size);
      const int batch_n = batch_end - batch_start;

      Tape tape;
      std::vector<Var> param_vars;
      param_vars.reserve(model.params.size());
      for (Matrix* p : model.params) param_vars.push_back(tape.input(*p));

      Var total{-1};
      for (int b = batch_start; b < batch_end; ++b) {
        const SequenceSample& base = train_set[order[b]];
        Var sample_loss;
        if (cfg.train_mask_ratio > 0.0) {
          SequenceSample masked = apply_mask(
              base, cfg.train_mask_ratio, cfg.train_mask_mode,
              mix_seed(mix_seed(base.seed, kTrainMaskStream),
                       static_cast<std::uint64_t>(epoch)));
          sample_loss = model.sample_loss(tape, param_vars, masked);
        } else {
          sample_loss = model.sample_loss(tape, param_vars, base);
        }
        total = total.valid() ? tape.add(total, sample_loss) : sample_loss;
      }
      Var batch_loss = tape.scale(total, 1.0 / batch_n);
      const double loss = tape.value(batch_loss)(0, 0);
      if (!std::isfinite(loss))
        throw std::runtime_error("train: non-finite loss " + fmt_double(loss) +
                                 " at epoch " + std::to_string(epoch) +
                                 ", batch " +
                                 std::to_string(batch_start / cfg.batch_size));
      loss_sum += loss * batch_n;

      tape.backward(batch_loss);
      std::vector<Matrix> grads;
      grads.reserve(param_vars.size());
      for (Var v : param_vars) grads.push_back(tape.grad(v));
      adam_update(model.params, grads, adam, lr);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / n;
    int correct = 0;
    for (const SequenceSample& s : val_set)
      if ((model.fake_score(s) >= 0.5 ? 1 : 0) == s.label) ++correct;
    stats.val_accuracy =
        val_set.empty() ? 0.0 : static_cast<double>(correct) / val_set.size();
    stats.optimizer_steps = static_cast<int>(adam.step);
    result.trace.push_back(stats);
  }
  return result;
}

TrainableModel make_trainable(GraceModel& model) {
  TrainableModel t;
  t.params = model.parameters();
  const ModelHyper hyper = model.hyper;
  t.sample_loss = [hyper](Tape& tape, const std::vector<Var>& params,
                          const SequenceSample& s) {
    ModelVars vars;
    vars.projector = params[0];
    vars.bias = params[1];
    vars.gcn.assign(params.begin() + 2, params.end() - 2);
    vars.readout = params[params.size() - 2];
    vars.classifier = params[params.size() - 1];
    ForwardVars fwd = forward_on_tape(tape, vars, hyper, s);
    return loss_on_tape(tape, fwd, s.label, hyper);
  };
  t.fake_score = [&model](const SequenceSample& s) {
    return predict(model, s).fake_score();
  };
  return t;
}

TrainableModel make_trainable(BaselineModel& model) {
  TrainableModel t;
  t.params = model.parameters();
  t.sample_loss = [](Tape& tape, const std::vector<Var>& params,
                     const SequenceSample& s) {
    return baseline_loss_on_tape(tape, params, s, s.label);
  };
  t.fake_score = [&model](const SequenceSample& s) {
    return baseline_predict(model, s).fake_score();
  };
  return t;
}

TrainResult train(GraceModel& model,
                  const std::vector<SequenceSample>& train_set,
                  const std::vector<SequenceSample>& val_set,
                  const TrainConfig& cfg) {
  TrainableModel t = make_trainable(model);
  AdamState adam = AdamState::zeros_like(t.params);
  return train_model(t, train_set, val_set, cfg, adam);
}

TrainResult train(BaselineModel& model,
                  const std::vector<SequenceSample>& train_set,
                  const std::vector<SequenceSample>& val_set,
                  const TrainConfig& cfg) {
  TrainableModel t = make_trainable(model);
  AdamState adam = AdamState::zeros_like(t.params);
  return train_model(t, train_set, val_set, cfg, adam);
}

}  // namespace grace
