#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "grace/feature_context.hpp"
#include "grace/metrics.hpp"
#include "grace/model.hpp"
#include "grace/rng.hpp"
#include "grace/sample.hpp"
#include "grace/train.hpp"

using namespace grace;

namespace {

GeneratorConfig tiny_gen() {
  GeneratorConfig g;
  g.frames = 4;
  g.height = 2;
  g.width = 2;
  g.channels_in = 3;
  g.signal_amplitude = 1.0;
  g.temporal_coherence = 0.4;
  return g;
}

ModelHyper tiny_hyper() {
  ModelHyper h;
  h.channels_in = 3;
  h.channels = 3;
  h.gcn_layers = 2;
  h.gcn_dim = 4;
  h.readout_dim = 4;
  return h;
}

std::vector<SequenceSample> make_dataset(int n, std::uint64_t seed) {
  GeneratorConfig g = tiny_gen();
  std::vector<SequenceSample> out;
  for (int i = 0; i < n; ++i)
    out.push_back(generate_sample(g, i % 2, mix_seed(seed, i)));
  return out;
}

// brute force over all (fake, real) pairs, ties counted half
double auc_oracle(const std::vector<int>& labels,
                  const std::vector<double>& scores) {
  double wins = 0.0;
  long pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace

TEST_CASE("metrics on the worked 4-sample example") {
  std::vector<int> labels = {1, 1, 0, 0};
  std::vector<double> scores = {0.9, 0.8, 0.1, 0.2};
  EvalMetrics m = compute_metrics(labels, scores);
  CHECK(m.accuracy == 1.0);
  CHECK(m.macro_f1 == 1.0);
  REQUIRE(m.auc.has_value());
  CHECK(*m.auc == 1.0);
  CHECK(*m.auc == auc_oracle(labels, scores));
}

TEST_CASE("AUC is 1 for separable scores and 0.5 for constant scores") {
  std::vector<int> labels = {0, 1, 0, 1, 0, 1};
  std::vector<double> separable = {0.1, 0.9, 0.2, 0.8, 0.15, 0.95};
  CHECK(*compute_metrics(labels, separable).auc == 1.0);

  std::vector<double> constant(6, 0.4);
  CHECK(*compute_metrics(labels, constant).auc == 0.5);
}

TEST_CASE("AUC matches the pair-counting oracle with ties") {
  Rng rng(5);
  std::vector<int> labels;
  std::vector<double> scores;
  for (int i = 0; i < 40; ++i) {
    labels.push_back(rng.uniform() < 0.5 ? 1 : 0);
    // quantized so ties actually occur
    scores.push_back(std::floor(rng.uniform() * 8) / 8.0);
  }
  if (std::count(labels.begin(), labels.end(), 1) == 0) labels[0] = 1;
  if (std::count(labels.begin(), labels.end(), 0) == 0) labels[1] = 0;
  EvalMetrics m = compute_metrics(labels, scores);
  REQUIRE(m.auc.has_value());
  CHECK(*m.auc == doctest::Approx(auc_oracle(labels, scores)).epsilon(1e-12));
}

TEST_CASE("single-class dataset reports AUC as undefined") {
  std::vector<int> labels = {1, 1, 1};
  std::vector<double> scores = {0.2, 0.6, 0.9};
  EvalMetrics m = compute_metrics(labels, scores);
  CHECK_FALSE(m.auc.has_value());
  CHECK(m.accuracy == doctest::Approx(2.0 / 3));
}

TEST_CASE("macro F1 counts an empty predicted class as zero") {
  // everything predicted fake; class 0 has no true positives
  std::vector<int> labels = {0, 1, 0, 1};
  std::vector<double> scores = {0.9, 0.9, 0.8, 0.7};
  EvalMetrics m = compute_metrics(labels, scores);
  // class 1: tp=2 fp=2 fn=0 -> f1 = 2*2/(2*2+2+0) = 2/3; class 0: f1 = 0
  CHECK(m.macro_f1 == doctest::Approx((2.0 / 3) / 2));
}

TEST_CASE("learning rate zero leaves parameters untouched") {
  GraceModel model = GraceModel::init(tiny_hyper(), 11);
  GraceModel before = model;
  auto dataset = make_dataset(8, 13);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  cfg.seed = 17;
  train(model, dataset, dataset, cfg);
  auto now = model.parameters();
  auto was = before.parameters();
  for (std::size_t k = 0; k < now.size(); ++k) CHECK(*now[k] == *was[k]);
}

TEST_CASE("single-sample training loss strictly decreases at first") {
  GraceModel model = GraceModel::init(tiny_hyper(), 19);
  std::vector<SequenceSample> one = {make_dataset(1, 23)[0]};
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 10;
  cfg.batch_size = 1;
  cfg.seed = 29;
  TrainResult r = train(model, one, one, cfg);
  REQUIRE(r.trace.size() == 10);
  for (int e = 1; e < 10; ++e)
    CHECK(r.trace[e].train_loss < r.trace[e - 1].train_loss);
}

TEST_CASE("optimizer step count is ceil(n/batch) per epoch") {
  GraceModel model = GraceModel::init(tiny_hyper(), 31);
  auto dataset = make_dataset(10, 37);
  TrainConfig cfg;
  cfg.learning_rate = 1e-4;
  cfg.epochs = 1;
  cfg.batch_size = 4;
  cfg.seed = 41;
  TrainResult r = train(model, dataset, dataset, cfg);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].optimizer_steps == 3);  // ceil(10/4)
}

TEST_CASE("learning rate decays by the configured factor") {
  TrainConfig cfg;
  cfg.learning_rate = 1e-4;
  cfg.decay_factor = 0.1;
  cfg.decay_every = 100;
  CHECK(cfg.learning_rate_at(0) == doctest::Approx(1e-4));
  CHECK(cfg.learning_rate_at(99) == doctest::Approx(1e-4));
  CHECK(cfg.learning_rate_at(100) == doctest::Approx(1e-5));
  CHECK(cfg.learning_rate_at(199) == doctest::Approx(1e-5));
  CHECK(cfg.learning_rate_at(200) == doctest::Approx(1e-6));
}

TEST_CASE("training is deterministic in the seed") {
  auto dataset = make_dataset(8, 43);
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.seed = 47;

  GraceModel m1 = GraceModel::init(tiny_hyper(), 53);
  GraceModel m2 = GraceModel::init(tiny_hyper(), 53);
  TrainResult r1 = train(m1, dataset, dataset, cfg);
  TrainResult r2 = train(m2, dataset, dataset, cfg);
  for (int e = 0; e < 3; ++e)
    CHECK(r1.trace[e].train_loss == r2.trace[e].train_loss);
  auto p1 = m1.parameters();
  auto p2 = m2.parameters();
  for (std::size_t k = 0; k < p1.size(); ++k) CHECK(*p1[k] == *p2[k]);
}

TEST_CASE("terminal feature l1 is non-increasing in alpha") {
  auto dataset = make_dataset(12, 59);
  std::vector<SequenceSample> val(dataset.begin(), dataset.begin() + 4);

  double last_l1 = -1.0;
  bool first = true;
  for (double alpha : {1e-7, 1e-6, 1e-5}) {
    ModelHyper h = tiny_hyper();
    h.sparsity_alpha = alpha;
    GraceModel model = GraceModel::init(h, 61);
    TrainConfig cfg;
    cfg.learning_rate = 2e-3;
    cfg.epochs = 15;
    cfg.batch_size = 4;
    cfg.seed = 67;
    train(model, dataset, val, cfg);

    double l1 = 0.0;
    for (const SequenceSample& s : dataset)
      l1 += abs_sum(
          assemble_features(s, model.projector, model.projector_bias));
    l1 /= dataset.size();
    if (!first) CHECK(l1 <= last_l1);
    first = false;
    last_l1 = l1;
  }
}

TEST_CASE("evaluation masking is order-independent and seeded") {
  GraceModel model = GraceModel::init(tiny_hyper(), 71);
  auto dataset = make_dataset(6, 73);
  EvalMetrics a = evaluate(model, dataset, 0.5, MaskMode::background);
  std::vector<SequenceSample> reversed(dataset.rbegin(), dataset.rend());
  EvalMetrics b = evaluate(model, reversed, 0.5, MaskMode::background);
  CHECK(a.accuracy == b.accuracy);
  REQUIRE(a.auc.has_value());
  REQUIRE(b.auc.has_value());
  CHECK(*a.auc == *b.auc);
}

TEST_CASE("non-finite loss aborts with epoch and batch context") {
  GraceModel model = GraceModel::init(tiny_hyper(), 79);
  // a huge projector bias overflows |X|_1, driving the loss to infinity
  for (std::size_t i = 0; i < model.projector_bias.size(); ++i)
    model.projector_bias.data()[i] = 1e308;
  auto dataset = make_dataset(2, 83);
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 1;
  cfg.batch_size = 2;
  cfg.seed = 89;
  CHECK_THROWS_WITH_AS(train(model, dataset, dataset, cfg),
                       doctest::Contains("epoch"), std::runtime_error);
}
