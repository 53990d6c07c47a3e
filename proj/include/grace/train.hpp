#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "grace/matrix.hpp"
#include "grace/model.hpp"
#include "grace/sample.hpp"
#include "grace/tape.hpp"

namespace grace {

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 200;
  double decay_factor = 0.1;
  int decay_every = 100;  // epochs per learning-rate step
  int batch_size = 8;
  std::uint64_t seed = 42;
  double train_mask_ratio = 0.0;
  MaskMode train_mask_mode = MaskMode::background;

  void validate() const;
  double learning_rate_at(int epoch) const;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  int optimizer_steps = 0;  // cumulative
};

struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  long step = 0;

  static AdamState zeros_like(const std::vector<Matrix*>& params);
};

/// First-order adaptive-moment update (beta1=0.9, beta2=0.999, eps=1e-8).
void adam_update(std::vector<Matrix*>& params, const std::vector<Matrix>& grads,
                 AdamState& state, double learning_rate);

/// Model-agnostic training hooks: the parameter list, a per-sample loss
/// builder over fresh tape leaves (in parameter order), and a fake-probability
/// score used for the validation trace.
struct TrainableModel {
  std::vector<Matrix*> params;
  std::function<Var(Tape&, const std::vector<Var>&, const SequenceSample&)>
      sample_loss;
  std::function<double(const SequenceSample&)> fake_score;
};

struct TrainResult {
  std::vector<EpochStats> trace;
};

// Deterministic mini-batch training: per-epoch shuffles and train-time mask
// draws derive from (seed, epoch), so a run can be resumed mid-way and
// reproduce an uninterrupted run exactly. Throws on non-finite loss with the
// epoch and batch in the message.
TrainResult train_model(TrainableModel& model,
                        const std::vector<SequenceSample>& train_set,
                        const std::vector<SequenceSample>& val_set,
                        const TrainConfig& cfg, AdamState& adam,
                        int start_epoch = 0);

TrainResult train(GraceModel& model,
                  const std::vector<SequenceSample>& train_set,
                  const std::vector<SequenceSample>& val_set,
                  const TrainConfig& cfg);

TrainResult train(BaselineModel& model,
                  const std::vector<SequenceSample>& train_set,
                  const std::vector<SequenceSample>& val_set,
                  const TrainConfig& cfg);

TrainableModel make_trainable(GraceModel& model);
TrainableModel make_trainable(BaselineModel& model);

}  // namespace grace
