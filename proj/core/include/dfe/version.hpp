#pragma once

namespace dfe {

inline constexpr const char* kToolName = "dfe";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace dfe
