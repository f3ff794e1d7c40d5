#include <gtest/gtest.h>

#include <json.hpp>

#include "lela/report_io.hpp"

namespace lela {
namespace {

TEST(ReportIo, NumberFormatting) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0 / 3.0), "0.6666666666666666");
}

TEST(ReportIo, EvalJson) {
  const EvalReport r = evaluate({{0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}}, 0.5);
  const auto j = nlohmann::json::parse(eval_report_to_json(r));
  EXPECT_DOUBLE_EQ(j["roc_auc"].get<double>(), 0.75);
  EXPECT_EQ(j["n_frames"], 4);
  EXPECT_EQ(j["confusion"]["tp"], 1);
  EXPECT_TRUE(j.contains("non_hate"));
  EXPECT_TRUE(j["warnings"].is_array());
  const std::string table = render_eval_table(r);
  EXPECT_NE(table.find("75.00"), std::string::npos);
  EXPECT_NE(table.find("tau=0.5"), std::string::npos);
}

TEST(ReportIo, SweepCsv) {
  const std::vector<SweepRow> rows{{0.3, 0.5}, {0.5, 1.0}};
  EXPECT_EQ(sweep_to_csv(rows), "tau,accuracy\n0.3,0.5\n0.5,1\n");
  const std::string svg = svg_sweep_curve(rows);
  EXPECT_TRUE(svg.starts_with("<svg"));
  EXPECT_NE(svg.find("class=\"accuracy\""), std::string::npos);
}

TEST(ReportIo, TimelineLayers) {
  std::vector<FrameScore> frames;
  for (int j = 0; j < 6; ++j) {
    FrameScore f;
    f.frame_index = j;
    f.timestamp_s = j;
    f.per_modality[Modality::kOcr] = (j == 2 || j == 3) ? 0.9 : 0.1;
    f.final_score = f.per_modality[Modality::kOcr];
    frames.push_back(f);
  }
  const HateProfile p = build_profile("a<b&c", frames, 0.5, {});
  const std::string with = svg_score_timeline(p, std::vector<int>{0, 0, 1, 1, 1, 0});
  EXPECT_NE(with.find("class=\"ground-truth\""), std::string::npos);
  EXPECT_NE(with.find("class=\"flagged\""), std::string::npos);
  EXPECT_NE(with.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(with.find("a&lt;b&amp;c"), std::string::npos);
  EXPECT_EQ(with.find("a<b&c"), std::string::npos);
  const std::string without = svg_score_timeline(p);
  EXPECT_EQ(without.find("class=\"ground-truth\""), std::string::npos);
}

}  // namespace
}  // namespace lela
