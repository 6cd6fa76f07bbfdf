#pragma once

namespace sud {

inline constexpr const char* kVersion = "0.1.0";
/// Bumped whenever a report or cache schema changes.
inline constexpr int kSchemaVersion = 1;

}  // namespace sud
