#include "lela/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "lela/error.hpp"

namespace lela {

VideoAnalysis analyze_video(const CaptionManifest& manifest, LlmGateway& gateway, const AnalysisOptions& options) {
  validate_policy(options.policy);
  if (!(options.tau >= 0.0 && options.tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");
  validate_prompt_config(options.scoring.prompt);

  const std::size_t n = manifest.frames.size();
  std::vector<FrameAnalysis> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t j = next++; j < n; j = next++) {
      try {
        results[j] = analyze_frame(manifest.frames[j], gateway, options.scoring, options.tau);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };

  const int workers = std::clamp(options.workers, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  VideoAnalysis out;
  std::vector<FrameScore> frames;
  frames.reserve(n);
  for (FrameAnalysis& r : results) {
    frames.push_back(r.score);
    std::move(r.traces.begin(), r.traces.end(), std::back_inserter(out.traces));
    std::move(r.exchanges.begin(), r.exchanges.end(), std::back_inserter(out.exchanges));
  }
  out.profile = build_profile(manifest.video_id, std::move(frames), options.tau, options.policy);
  return out;
}

}  // namespace lela
