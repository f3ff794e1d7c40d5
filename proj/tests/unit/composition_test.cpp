#include <gtest/gtest.h>

#include "lela/composition.hpp"
#include "lela/digest.hpp"
#include "lela/error.hpp"
#include "test_support.hpp"

namespace lela {
namespace {

using testing::frame;

TEST(Compose, SpeechAnchoredRendering) {
  const auto f = frame(0, {{Modality::kSpeech, "they are vermin"}, {Modality::kOcr, "WHITE POWER"}});
  const auto c = compose(f, Modality::kOcr);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->text, "[SPEECH] they are vermin\n[OCR] WHITE POWER");
  EXPECT_EQ(c->modality, Modality::kOcr);
  EXPECT_FALSE(c->speech_fallback);
}

TEST(Compose, AbsentSpeechRendersNone) {
  const auto f = frame(3, {{Modality::kMusic, "aggressive metal riff"}});
  const auto c = compose(f, Modality::kMusic);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->text, "[SPEECH] (none)\n[MUSIC] aggressive metal riff");
  EXPECT_EQ(c->frame_index, 3);
}

TEST(Compose, AbsentModalityYieldsNothing) {
  const auto f = frame(0, {{Modality::kSpeech, "hi"}});
  EXPECT_FALSE(compose(f, Modality::kImage).has_value());
}

TEST(Compose, TagsPerModality) {
  const auto f = frame(0, {{Modality::kSpeech, "s"},
                           {Modality::kImage, "i"},
                           {Modality::kOcr, "o"},
                           {Modality::kMusic, "m"},
                           {Modality::kVideo, "v"}});
  EXPECT_EQ(compose(f, Modality::kImage)->text, "[SPEECH] s\n[IMAGE] i");
  EXPECT_EQ(compose(f, Modality::kVideo)->text, "[SPEECH] s\n[VIDEO] v");
  EXPECT_THROW(compose(f, Modality::kSpeech), DomainError);
}

TEST(Compose, SpeechFallback) {
  const auto c = compose_speech_fallback(frame(1, {{Modality::kSpeech, "go home"}}));
  EXPECT_TRUE(c.speech_fallback);
  EXPECT_EQ(c.modality, Modality::kVideo);
  EXPECT_EQ(c.text, "[SPEECH] go home\n[VIDEO] go home");
  EXPECT_THROW(compose_speech_fallback(frame(1, {})), DomainError);
}

TEST(Summarize, EchoRule) {
  auto g = testing::mock_gateway(testing::marker_rules());
  const ComposedCaption c{0, Modality::kOcr, "[SPEECH] x\n[OCR] y", false};
  ExchangeLog log;
  const SummaryCaption s = summarize(c, *g.gateway, PromptConfig{}, &log);
  EXPECT_EQ(s.text, c.text);
  EXPECT_EQ(s.source_hash, sha256_hex(c.text));
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].stage, "summary");
}

TEST(Summarize, PrefixRule) {
  auto g = testing::mock_gateway(testing::rules({
      {"summary:prefix", {"Summarize the following"}, "SUMMARY: {input}", 1},
      {"default", {}, "0.1", 0},
  }));
  const ComposedCaption c{0, Modality::kImage, "[SPEECH] (none)\n[IMAGE] a crowd", false};
  EXPECT_EQ(summarize(c, *g.gateway, PromptConfig{}).text, "SUMMARY: " + c.text);
}

TEST(Summarize, EmptyTextIsDomainError) {
  auto g = testing::mock_gateway(testing::marker_rules());
  EXPECT_THROW(summarize(ComposedCaption{0, Modality::kOcr, "", false}, *g.gateway, PromptConfig{}), DomainError);
  EXPECT_EQ(g.backend->calls(), 0);
}

TEST(Summarize, BlankRepliesExhaustRetries) {
  auto g = testing::mock_gateway(testing::rules({{"blank", {}, "   ", 0}}));
  const ComposedCaption c{0, Modality::kOcr, "[SPEECH] x\n[OCR] y", false};
  EXPECT_THROW(summarize(c, *g.gateway, PromptConfig{}), EmptyReplyError);
  EXPECT_EQ(g.backend->calls(), 3);
}

TEST(Summarize, UsesSummaryModel) {
  auto backend = std::make_shared<testing::ScriptedBackend>();
  backend->set_fallback("short");
  LlmGateway gateway(backend, std::make_shared<MemoryReplyCache>());
  PromptConfig config;
  config.model_id = "scorer";
  config.summary_model_id = "summarizer";
  summarize(ComposedCaption{0, Modality::kOcr, "[SPEECH] x\n[OCR] y", false}, gateway, config);
  ASSERT_EQ(backend->requests().size(), 1u);
  EXPECT_EQ(backend->requests()[0].model_id, "summarizer");
  EXPECT_EQ(backend->requests()[0].messages.size(), 1u);
  EXPECT_EQ(backend->requests()[0].messages[0].role, Role::kUser);
}

}  // namespace
}  // namespace lela
