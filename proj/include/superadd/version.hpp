#pragma once

namespace superadd {

inline constexpr const char *kVersion = "0.1.0";

} // namespace superadd
