#pragma once

// Serialization of reports: one JSON document per (symbol, p) and CSV rows.

#include <string>

#include <json.hpp>

#include "crange/criteria.hpp"

namespace crange {

/// Bumped on any incompatible change to the report layout; see docs/report_schema.md.
inline constexpr int kReportSchemaVersion = 1;

nlohmann::json criteria_config_json(const CriteriaConfig& config);

/// The full report with the resolved run configuration embedded under "config".
nlohmann::json report_json(const ClosedRangeReport& report, const nlohmann::json& config_echo);

/// Deterministic text form: sorted keys, two-space indent, trailing newline.
std::string dump_document(const nlohmann::json& doc);

std::string csv_escape(const std::string& field);
/// Shortest round-trip decimal form.
std::string csv_number(double x);

std::string summary_csv_header();
std::string summary_csv_row(const ClosedRangeReport& report);

}  // namespace crange
