#include "lela/evaluation.hpp"

#include <algorithm>
#include <numeric>

#include "lela/error.hpp"
#include "lela/localization.hpp"

namespace lela {

namespace {

double ratio(long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

std::vector<std::size_t> order_by_score_desc(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

void validate_labeled_scores(const LabeledScores& data) {
  if (data.scores.size() != data.labels.size()) {
    throw DomainError("scores and labels differ in length (" + std::to_string(data.scores.size()) + " vs " +
                      std::to_string(data.labels.size()) + ")");
  }
  if (data.scores.empty()) throw DomainError("at least one scored frame is required");
  for (double s : data.scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("scores must lie in [0, 1]");
  }
  for (int l : data.labels) {
    if (l != 0 && l != 1) throw DomainError("labels must be 0 or 1");
  }
}

double roc_auc(const LabeledScores& data) {
  validate_labeled_scores(data);
  const long positives = std::count(data.labels.begin(), data.labels.end(), 1);
  const long negatives = static_cast<long>(data.labels.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw DegenerateError("ROC-AUC needs both classes (positives=" + std::to_string(positives) +
                          ", negatives=" + std::to_string(negatives) + ")");
  }
  // Midranks over ascending scores; the positive rank sum gives the U statistic.
  std::vector<std::size_t> order(data.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return data.scores[a] < data.scores[b]; });
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && data.scores[order[j + 1]] == data.scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (data.labels[order[k]] == 1) positive_rank_sum += midrank;
    }
    i = j + 1;
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

double average_precision(const LabeledScores& data) {
  validate_labeled_scores(data);
  const long positives = std::count(data.labels.begin(), data.labels.end(), 1);
  if (positives == 0) throw DegenerateError("average precision needs at least one positive label");
  const std::vector<std::size_t> order = order_by_score_desc(data.scores);
  long tp = 0;
  long seen = 0;
  double previous_recall = 0.0;
  double ap = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && data.scores[order[j]] == data.scores[order[i]]) {
      tp += data.labels[order[j]];
      ++seen;
      ++j;
    }
    const double recall = ratio(tp, positives);
    ap += (recall - previous_recall) * ratio(tp, seen);
    previous_recall = recall;
    i = j;
  }
  return ap;
}

ClassificationReport classification_report(std::span<const int> flags, std::span<const int> labels, double tau) {
  if (flags.size() != labels.size()) {
    throw DomainError("flags and labels differ in length (" + std::to_string(flags.size()) + " vs " +
                      std::to_string(labels.size()) + ")");
  }
  ClassificationReport r;
  r.tau_used = tau;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const bool predicted = flags[i] == 1;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++r.tp;
    else if (predicted) ++r.fp;
    else if (actual) ++r.fn;
    else ++r.tn;
  }
  const long n = r.tp + r.fp + r.tn + r.fn;
  r.accuracy = ratio(r.tp + r.tn, n);
  r.precision_hate = ratio(r.tp, r.tp + r.fp);
  r.recall_hate = ratio(r.tp, r.tp + r.fn);
  r.f1_hate = harmonic(r.precision_hate, r.recall_hate);
  r.precision_non_hate = ratio(r.tn, r.tn + r.fn);
  r.recall_non_hate = ratio(r.tn, r.tn + r.fp);
  r.f1_non_hate = harmonic(r.precision_non_hate, r.recall_non_hate);
  r.macro_f1 = (r.f1_hate + r.f1_non_hate) / 2.0;
  if (n == 0) r.warnings.emplace_back("no frames; all metrics reported as 0");
  if (r.tp + r.fp == 0) r.warnings.emplace_back("precision_hate undefined (no frame flagged); reported as 0");
  if (r.tp + r.fn == 0) r.warnings.emplace_back("recall_hate undefined (no hateful label); reported as 0");
  if (r.tn + r.fn == 0) r.warnings.emplace_back("precision_non_hate undefined (every frame flagged); reported as 0");
  if (r.tn + r.fp == 0) r.warnings.emplace_back("recall_non_hate undefined (no non-hateful label); reported as 0");
  return r;
}

EvalReport evaluate(const LabeledScores& data, double tau) {
  validate_labeled_scores(data);
  EvalReport report;
  report.roc_auc = roc_auc(data);
  report.pr_auc = average_precision(data);
  const std::vector<int> flags = binarize(data.scores, tau);
  report.confusion = classification_report(flags, data.labels, tau);
  report.accuracy = report.confusion.accuracy;
  report.macro_f1 = report.confusion.macro_f1;
  report.f1_hate = report.confusion.f1_hate;
  report.precision_hate = report.confusion.precision_hate;
  report.recall_hate = report.confusion.recall_hate;
  report.tau_used = tau;
  report.n_frames = static_cast<int>(data.scores.size());
  return report;
}

std::vector<double> default_sweep_taus() { return {0.3, 0.4, 0.5, 0.6, 0.7}; }

std::vector<SweepRow> threshold_sweep(std::span<const double> finals, std::span<const int> labels,
                                      std::span<const double> taus) {
  if (taus.empty()) throw DomainError("threshold sweep needs at least one tau");
  if (finals.size() != labels.size()) {
    throw DomainError("finals and labels differ in length (" + std::to_string(finals.size()) + " vs " +
                      std::to_string(labels.size()) + ")");
  }
  std::vector<SweepRow> rows;
  rows.reserve(taus.size());
  for (double tau : taus) {
    const std::vector<int> flags = binarize(finals, tau);
    rows.push_back({tau, classification_report(flags, labels, tau).accuracy});
  }
  return rows;
}

}  // namespace lela
