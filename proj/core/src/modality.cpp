#include "lela/modality.hpp"

namespace lela {

std::string_view to_string(Modality m) {
  switch (m) {
    case Modality::kSpeech: return "speech";
    case Modality::kImage: return "image";
    case Modality::kOcr: return "ocr";
    case Modality::kMusic: return "music";
    case Modality::kVideo: return "video";
  }
  return "unknown";
}

std::optional<Modality> modality_from_string(std::string_view name) {
  for (Modality m : kAllModalities) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view modality_tag(Modality m) {
  switch (m) {
    case Modality::kSpeech: return "SPEECH";
    case Modality::kImage: return "IMAGE";
    case Modality::kOcr: return "OCR";
    case Modality::kMusic: return "MUSIC";
    case Modality::kVideo: return "VIDEO";
  }
  return "UNKNOWN";
}

std::string_view modality_prompt_name(Modality m) {
  switch (m) {
    case Modality::kSpeech: return "speech";
    case Modality::kImage: return "frame";
    case Modality::kOcr: return "OCR";
    case Modality::kMusic: return "music";
    case Modality::kVideo: return "video";
  }
  return "unknown";
}

}  // namespace lela
