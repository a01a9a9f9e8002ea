#pragma once

namespace cstarmod {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kVersionString = "cstarmod 0.1.0";
inline constexpr int kReportSchemaVersion = 1;

} // namespace cstarmod
