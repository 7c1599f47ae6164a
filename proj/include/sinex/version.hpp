#pragma once

namespace sinex {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sinex
