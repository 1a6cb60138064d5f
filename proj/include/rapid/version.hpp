#pragma once

namespace rapid {

inline constexpr const char* kVersion = "rapidgraph 0.1.0";
inline constexpr int kSchemaVersion = 1;

} // namespace rapid
