#pragma once

namespace nlosd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlosd
