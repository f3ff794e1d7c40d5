#pragma once

#include <string>
#include <string_view>

namespace lela {

/// Lower-case 64-hex-digit SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace lela
