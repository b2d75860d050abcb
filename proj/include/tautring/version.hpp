#pragma once

namespace tautring {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr int kCacheFormatVersion = 1;

}  // namespace tautring
