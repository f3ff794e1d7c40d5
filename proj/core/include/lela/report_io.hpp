#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lela/ablation.hpp"
#include "lela/evaluation.hpp"
#include "lela/localization.hpp"

namespace lela {

/// Shortest round-trip decimal form of `value`.
std::string format_number(double value);

/// EvalReport as a JSON object (fractions in [0,1]) plus confusion counts and warnings.
std::string eval_report_to_json(const EvalReport& report);

/// Human-readable table; ROC-AUC and PR-AUC are shown as percentages.
std::string render_eval_table(const EvalReport& report);

/// "tau,accuracy" header plus one row per SweepRow.
std::string sweep_to_csv(std::span<const SweepRow> rows);

std::string ablation_to_json(std::span<const AblationRow> rows);
std::string ablation_to_csv(std::span<const AblationRow> rows);

/// Score timeline: final-score polyline, flagged frames shaded, the threshold
/// as a dashed line and ground-truth spans (when given) as bands.
std::string svg_score_timeline(const HateProfile& profile, const std::optional<std::vector<int>>& labels = {});

/// Accuracy against threshold.
std::string svg_sweep_curve(std::span<const SweepRow> rows);

}  // namespace lela
