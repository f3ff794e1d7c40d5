#include "lela/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "json_util.hpp"

namespace lela {

using detail::OrderedJson;

std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return ec == std::errc() ? std::string(buffer, ptr) : std::to_string(value);
}

namespace {

OrderedJson report_json(const EvalReport& report) {
  OrderedJson j;
  j["roc_auc"] = report.roc_auc;
  j["pr_auc"] = report.pr_auc;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  j["f1_hate"] = report.f1_hate;
  j["precision_hate"] = report.precision_hate;
  j["recall_hate"] = report.recall_hate;
  j["tau_used"] = report.tau_used;
  j["n_frames"] = report.n_frames;
  const ClassificationReport& c = report.confusion;
  j["confusion"] = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
  j["non_hate"] = {{"precision", c.precision_non_hate}, {"recall", c.recall_non_hate}, {"f1", c.f1_non_hate}};
  j["warnings"] = c.warnings;
  return j;
}

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string modalities_label(const std::vector<Modality>& ms) {
  if (ms.empty()) return "speech";
  std::string out;
  for (Modality m : ms) {
    if (!out.empty()) out += "+";
    out += std::string(to_string(m));
  }
  return out;
}

}  // namespace

std::string eval_report_to_json(const EvalReport& report) { return report_json(report).dump(2) + "\n"; }

std::string render_eval_table(const EvalReport& report) {
  std::ostringstream out;
  out << "PR-AUC (%)  ROC-AUC (%)  Acc     M-F1    F1(H)   P(H)    R(H)\n";
  out << fixed(100.0 * report.pr_auc, 2) << "       " << fixed(100.0 * report.roc_auc, 2) << "        "
      << fixed(report.accuracy, 4) << "  " << fixed(report.macro_f1, 4) << "  " << fixed(report.f1_hate, 4) << "  "
      << fixed(report.precision_hate, 4) << "  " << fixed(report.recall_hate, 4) << "\n";
  out << "frames=" << report.n_frames << " tau=" << format_number(report.tau_used) << "\n";
  for (const std::string& w : report.confusion.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "tau,accuracy\n";
  for (const SweepRow& r : rows) out << format_number(r.tau) << "," << format_number(r.accuracy) << "\n";
  return out.str();
}

std::string ablation_to_json(std::span<const AblationRow> rows) {
  OrderedJson out = OrderedJson::array();
  for (const AblationRow& row : rows) {
    OrderedJson j;
    j["label"] = row.config.label;
    j["contextualization"] = row.config.scoring.prompt.enable_contextualization;
    j["rationale"] = row.config.scoring.prompt.enable_rationale;
    OrderedJson modalities = OrderedJson::array();
    for (Modality m : row.config.scoring.composable) modalities.push_back(std::string(to_string(m)));
    j["modalities"] = std::move(modalities);
    j["report"] = report_json(row.report);
    j["transcript_sha256"] = row.transcript_sha256;
    j["exchanges"] = row.exchanges;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string ablation_to_csv(std::span<const AblationRow> rows) {
  std::ostringstream out;
  out << "label,contextualization,rationale,modalities,roc_auc,pr_auc,accuracy,macro_f1,exchanges,transcript_sha256\n";
  for (const AblationRow& row : rows) {
    out << row.config.label << "," << row.config.scoring.prompt.enable_contextualization << ","
        << row.config.scoring.prompt.enable_rationale << "," << modalities_label(row.config.scoring.composable)
        << "," << format_number(row.report.roc_auc) << "," << format_number(row.report.pr_auc) << ","
        << format_number(row.report.accuracy) << "," << format_number(row.report.macro_f1) << "," << row.exchanges
        << "," << row.transcript_sha256 << "\n";
  }
  return out.str();
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 240.0;
constexpr double kMargin = 32.0;

double x_at(double i, double n) { return kMargin + (n <= 1 ? 0.0 : i / (n - 1)) * (kWidth - 2 * kMargin); }
double y_at(double v) { return kHeight - kMargin - v * (kHeight - 2 * kMargin); }

std::string svg_header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth, 0) + "\" height=\"" +
         fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fixed(kWidth, 0) + " " + fixed(kHeight, 0) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<line x1=\"" + fixed(kMargin, 1) + "\" y1=\"" +
         fixed(y_at(0), 1) + "\" x2=\"" + fixed(kWidth - kMargin, 1) + "\" y2=\"" + fixed(y_at(0), 1) +
         "\" stroke=\"black\"/>\n" + "<line x1=\"" + fixed(kMargin, 1) + "\" y1=\"" + fixed(y_at(0), 1) +
         "\" x2=\"" + fixed(kMargin, 1) + "\" y2=\"" + fixed(y_at(1), 1) + "\" stroke=\"black\"/>\n";
}

}  // namespace

std::string svg_score_timeline(const HateProfile& profile, const std::optional<std::vector<int>>& labels) {
  std::ostringstream out;
  out << svg_header();
  const double n = static_cast<double>(profile.frames.size());
  const double half = n <= 1 ? 4.0 : (kWidth - 2 * kMargin) / (2 * (n - 1));
  auto band = [&](const Segment& s, const char* fill, const char* cls) {
    const double x0 = std::max(kMargin, x_at(s.start_frame, n) - half);
    const double x1 = std::min(kWidth - kMargin, x_at(s.end_frame, n) + half);
    out << "<rect class=\"" << cls << "\" x=\"" << fixed(x0, 1) << "\" y=\"" << fixed(y_at(1), 1) << "\" width=\""
        << fixed(x1 - x0, 1) << "\" height=\"" << fixed(y_at(0) - y_at(1), 1) << "\" fill=\"" << fill
        << "\" fill-opacity=\"0.35\"/>\n";
  };
  if (labels) {
    for (const Segment& s : extract_segments(*labels)) band(s, "pink", "ground-truth");
  }
  for (const Segment& s : profile.segments) band(s, "red", "flagged");
  out << "<line class=\"tau\" x1=\"" << fixed(kMargin, 1) << "\" y1=\"" << fixed(y_at(profile.tau), 1) << "\" x2=\""
      << fixed(kWidth - kMargin, 1) << "\" y2=\"" << fixed(y_at(profile.tau), 1)
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  out << "<polyline class=\"final-score\" fill=\"none\" stroke=\"navy\" stroke-width=\"1.5\" points=\"";
  for (std::size_t j = 0; j < profile.frames.size(); ++j) {
    if (j) out << " ";
    out << fixed(x_at(static_cast<double>(j), n), 1) << "," << fixed(y_at(profile.frames[j].final_score), 1);
  }
  out << "\"/>\n<text x=\"" << fixed(kMargin, 1) << "\" y=\"16\" font-size=\"12\">" << xml_escape(profile.video_id)
      << " (tau=" << format_number(profile.tau) << ")</text>\n</svg>\n";
  return out.str();
}

std::string svg_sweep_curve(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << svg_header();
  double lo = 1.0;
  double hi = 0.0;
  for (const SweepRow& r : rows) {
    lo = std::min(lo, r.tau);
    hi = std::max(hi, r.tau);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  out << "<polyline class=\"accuracy\" fill=\"none\" stroke=\"darkgreen\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double x = kMargin + (rows[i].tau - lo) / span * (kWidth - 2 * kMargin);
    if (i) out << " ";
    out << fixed(x, 1) << "," << fixed(y_at(rows[i].accuracy), 1);
  }
  out << "\"/>\n";
  for (const SweepRow& r : rows) {
    const double x = kMargin + (r.tau - lo) / span * (kWidth - 2 * kMargin);
    out << "<circle cx=\"" << fixed(x, 1) << "\" cy=\"" << fixed(y_at(r.accuracy), 1) << "\" r=\"3\"/>\n"
        << "<text x=\"" << fixed(x, 1) << "\" y=\"" << fixed(kHeight - 12, 1) << "\" font-size=\"10\" "
        << "text-anchor=\"middle\">" << format_number(r.tau) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace lela
