#pragma once

#include <span>
#include <string>
#include <vector>

namespace lela {

struct LabeledScores {
  std::vector<double> scores;
  std::vector<int> labels;
};

/// Throws DomainError unless lengths match, n >= 1, scores lie in [0,1] and labels in {0,1}.
void validate_labeled_scores(const LabeledScores& data);

/// Mann-Whitney statistic: P(s+ > s-) + 0.5 P(s+ = s-) over all positive-negative
/// pairs. Throws DegenerateError when only one class is present.
double roc_auc(const LabeledScores& data);

/// Sum over descending-score cutoffs (ties grouped) of (R_k - R_{k-1}) * P_k.
/// Throws DegenerateError when there are no positives.
double average_precision(const LabeledScores& data);

/// Confusion counts with hate (label 1) as the positive class. Undefined
/// ratios are reported as 0 and listed in `warnings`.
struct ClassificationReport {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
  double accuracy = 0.0;
  double precision_hate = 0.0;
  double recall_hate = 0.0;
  double f1_hate = 0.0;
  double precision_non_hate = 0.0;
  double recall_non_hate = 0.0;
  double f1_non_hate = 0.0;
  double macro_f1 = 0.0;
  double tau_used = 0.5;
  std::vector<std::string> warnings;
};

ClassificationReport classification_report(std::span<const int> flags, std::span<const int> labels, double tau);

struct EvalReport {
  double roc_auc = 0.0;
  double pr_auc = 0.0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double f1_hate = 0.0;
  double precision_hate = 0.0;
  double recall_hate = 0.0;
  double tau_used = 0.5;
  int n_frames = 0;
  ClassificationReport confusion;
};

/// Full frame-level report: ranking metrics on the scores, classification
/// metrics on scores binarized at `tau`.
EvalReport evaluate(const LabeledScores& data, double tau);

struct SweepRow {
  double tau = 0.0;
  double accuracy = 0.0;
};

/// The default grid {0.3, 0.4, 0.5, 0.6, 0.7}.
std::vector<double> default_sweep_taus();

std::vector<SweepRow> threshold_sweep(std::span<const double> finals, std::span<const int> labels,
                                      std::span<const double> taus);

}  // namespace lela
