#pragma once

namespace foulwall {

inline constexpr const char* version = "0.1.0";

// Bumped whenever the frozen flow-field file layout changes.
inline constexpr int frozen_format_version = 1;

} // namespace foulwall
