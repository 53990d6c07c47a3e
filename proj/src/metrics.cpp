#include "grace/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "grace/rng.hpp"

namespace grace {

EvalMetrics compute_metrics(const std::vector<int>& labels,
                            const std::vector<double>& fake_scores) {
  if (labels.size() != fake_scores.size())
    throw std::invalid_argument("compute_metrics: size mismatch");
  if (labels.empty())
    throw std::invalid_argument("compute_metrics: empty input");

  const int n = static_cast<int>(labels.size());
  EvalMetrics m;
  m.n_samples = n;

  int correct = 0;
  // confusion counts per class: tp, fp, fn
  long tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
  for (int i = 0; i < n; ++i) {
    const int pred = fake_scores[i] >= 0.5 ? 1 : 0;
    if (pred == labels[i]) {
      ++correct;
      ++tp[pred];
    } else {
      ++fp[pred];
      ++fn[labels[i]];
    }
  }
  m.accuracy = static_cast<double>(correct) / n;

  double f1_sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    const double denom = static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
    f1_sum += denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
  }
  m.macro_f1 = f1_sum / 2.0;

  long n_pos = std::count(labels.begin(), labels.end(), 1);
  long n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return m;  // AUC undefined

  // Mann-Whitney statistic via average ranks over tied groups.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return fake_scores[a] < fake_scores[b];
  });
  double rank_sum_pos = 0.0;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j < n && fake_scores[order[j]] == fake_scores[order[i]]) ++j;
    const double avg_rank = (i + 1 + j) / 2.0;  // 1-based average of [i+1, j]
    for (int k = i; k < j; ++k)
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    i = j;
  }
  const double u = rank_sum_pos - n_pos * (n_pos + 1) / 2.0;
  m.auc = u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
  return m;
}

EvalMetrics evaluate_scores(const ScoreFn& score,
                            const std::vector<SequenceSample>& samples,
                            double mask_ratio, MaskMode mode) {
  std::vector<int> labels;
  std::vector<double> scores;
  labels.reserve(samples.size());
  scores.reserve(samples.size());
  for (const SequenceSample& s : samples) {
    labels.push_back(s.label);
    if (mask_ratio > 0.0) {
      const std::uint64_t mask_seed =
          mix_seed(mix_seed(s.seed, std::bit_cast<std::uint64_t>(mask_ratio)),
                   mode == MaskMode::black ? 1u : 0u);
      scores.push_back(score(apply_mask(s, mask_ratio, mode, mask_seed)));
    } else {
      scores.push_back(score(s));
    }
  }
  return compute_metrics(labels, scores);
}

EvalMetrics evaluate(const GraceModel& model,
                     const std::vector<SequenceSample>& samples,
                     double mask_ratio, MaskMode mode) {
  return evaluate_scores(
      [&](const SequenceSample& s) { return predict(model, s).fake_score(); },
      samples, mask_ratio, mode);
}

EvalMetrics evaluate(const BaselineModel& model,
                     const std::vector<SequenceSample>& samples,
                     double mask_ratio, MaskMode mode) {
  return evaluate_scores(
      [&](const SequenceSample& s) {
        return baseline_predict(model, s).fake_score();
      },
      samples, mask_ratio, mode);
}

}  // namespace grace
