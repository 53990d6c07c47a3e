#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "grace/model.hpp"
#include "grace/sample.hpp"

namespace grace {

struct EvalMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> auc;  // empty when only one class is present
  int n_samples = 0;
};

/// Accuracy (P(fake) >= 0.5 predicts fake), macro F1 (empty-class F1 counts
/// as 0) and rank-statistic AUC with ties counted half.
EvalMetrics compute_metrics(const std::vector<int>& labels,
                            const std::vector<double>& fake_scores);

using ScoreFn = std::function<double(const SequenceSample&)>;

/// Masks every sample at mask_ratio (seeded from the sample seed, the ratio
/// and the mode, so results are order-independent) and scores it.
EvalMetrics evaluate_scores(const ScoreFn& score,
                            const std::vector<SequenceSample>& samples,
                            double mask_ratio, MaskMode mode);

EvalMetrics evaluate(const GraceModel& model,
                     const std::vector<SequenceSample>& samples,
                     double mask_ratio, MaskMode mode);

EvalMetrics evaluate(const BaselineModel& model,
                     const std::vector<SequenceSample>& samples,
                     double mask_ratio, MaskMode mode);

}  // namespace grace
