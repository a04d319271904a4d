#pragma once

namespace mixdetect {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mixdetect
