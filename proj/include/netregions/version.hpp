#pragma once

namespace netregions {

inline constexpr const char* kVersion = "0.1.0";

/// Stamped into every artifact (CSV header comment, JSON member) so readers
/// can reject files written by an incompatible release.
inline constexpr int kSchemaVersion = 1;

}  // namespace netregions
