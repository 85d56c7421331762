#pragma once

namespace synchrony {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace synchrony
