#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace lela {

/// Caption channels. Speech is the anchor; the other four are composed with it.
enum class Modality { kSpeech, kImage, kOcr, kMusic, kVideo };

inline constexpr std::array<Modality, 5> kAllModalities = {
    Modality::kSpeech, Modality::kImage, Modality::kOcr, Modality::kMusic, Modality::kVideo};

/// Composable set in fusion order (image, ocr, music, video).
inline constexpr std::array<Modality, 4> kComposableModalities = {
    Modality::kImage, Modality::kOcr, Modality::kMusic, Modality::kVideo};

/// Lower-case wire name: "speech", "image", "ocr", "music", "video".
std::string_view to_string(Modality m);
std::optional<Modality> modality_from_string(std::string_view name);

/// Upper-case tag used in composed captions: IMAGE, OCR, MUSIC, VIDEO (SPEECH for speech).
std::string_view modality_tag(Modality m);

/// Name substituted into the rationale prompt: frame, OCR, music, video.
std::string_view modality_prompt_name(Modality m);

constexpr bool is_composable(Modality m) { return m != Modality::kSpeech; }

}  // namespace lela
