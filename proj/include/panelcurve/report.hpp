#pragma once

#include <string>

#include "panelcurve/analysis.hpp"

namespace panelcurve {

// Significance stars at the 10/5/1 percent thresholds.
std::string stars(double p_value);

std::string render_text(const AnalysisReport& report);
std::string render_csv(const AnalysisReport& report); // tidy (model, coefficient) rows
std::string render_json(const AnalysisReport& report);
std::string render_report(const AnalysisReport& report, OutputFormat format);

AnalysisReport report_from_json(const std::string& json_text);

// Stand-alone tables for the narrow CLI subcommands.
std::string render_unit_root_table(const UnitRootSection& section);
std::string render_spec_test_table(const AnalysisReport& report);
std::string render_estimates_table(const ModeResults& mode);

} // namespace panelcurve
