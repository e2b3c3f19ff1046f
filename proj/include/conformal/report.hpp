#pragma once

#include "conformal/completeness.hpp"
#include "conformal/corollary.hpp"

#include <string>

namespace conformal {

inline constexpr int kReportSchemaVersion = 1;

/// "%.17g"
std::string format_number(double v);

/// CSV with columns s, x1..xn, v1..vn, g_speed (one row per grid node).
std::string trace_csv(const CurvePath& curve, const MetricChartd& metric);

/// CSV with columns T, truncation.
std::string truncation_csv(const IntegralVerdict& v);

/// Verdict report as JSON text (no timestamps; byte-identical for identical inputs).
std::string verdict_json(const CompletenessVerdict& v, const std::string& witness_trace_file);

std::string integral_json(const IntegralVerdict& v);

std::string corollary_json(const CorollaryReport& r);

/// {"tool", "schema_version", "created", "command"}; the only place a timestamp appears.
std::string metadata_json(const std::string& command);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace conformal
