#pragma once

namespace annulus {

/// Library and report-schema versions, echoed in every emitted report.
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "annulus-report/1";

}  // namespace annulus
