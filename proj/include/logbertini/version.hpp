#pragma once

namespace logbertini {

// Bumped whenever an algorithm change could alter report bytes.
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "logbertini/1";

}  // namespace logbertini
