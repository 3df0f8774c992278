#pragma once

#include <iosfwd>
#include <string>

#include "motifcut/mechanism.hpp"

#include <json.hpp>

namespace motifcut {

// JSON is the complete record of a run; the CSV summary is one row per run
// with a stable column order, for sweep aggregation.
enum class ReportFormat { json, csv_summary };

nlohmann::json report_to_json(const MechanismReport& report);
MechanismReport report_from_json(const nlohmann::json& j);

// Removes every wall-clock field, at any depth.  Two runs with the same seed
// and inputs must serialize identically after scrubbing.
void scrub_timing(nlohmann::json& j);

std::string csv_header();
std::string csv_row(const MechanismReport& report);

void emit_report(const MechanismReport& report, std::ostream& out, ReportFormat format);
void emit_report_file(const MechanismReport& report, const std::string& path,
                      ReportFormat format);

}  // namespace motifcut
