#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "panelcurve/dataset.hpp"

namespace panelcurve {

/// ln(x + c). The shift c keeps non-positive observations inside the log
/// domain; throws NumericError when x + c <= 0.
double log_shift(double x, double c);

// Default shift for a series: max(0, -min) + 1, computed over non-hole cells.
double default_log_shift(std::span<const Cell> values);
double default_log_shift(const Grid& grid);

// Per-entity first difference: out[t] = in[t] - in[t-1], hole at t = 0,
// holes propagate.
Series first_diff(std::span<const Cell> series);
Grid first_diff(const Grid& grid);

// k > 0 lags (value from t-k), k < 0 leads; vacated positions are holes.
// Never crosses entity boundaries. |k| >= length yields an all-hole series.
Series shift(std::span<const Cell> series, int k);
Grid shift(const Grid& grid, int k);

enum class RecessionRule {
    nonpositive, // growth <= 0 marks recession (default)
    negative     // growth < 0
};

const char* to_string(RecessionRule rule);
RecessionRule recession_rule_from_string(const std::string& name);

/// 0/1 indicator of recessionary periods derived from a growth series.
/// Holes in the source yield holes in the indicator.
struct RegimeDummy {
    Grid indicator;
    std::string source;
    RecessionRule rule = RecessionRule::nonpositive;
};

RegimeDummy recession_dummy(const Grid& growth, RecessionRule rule = RecessionRule::nonpositive,
                            const std::string& source = "gdp_growth");
Series recession_dummy(std::span<const Cell> growth,
                       RecessionRule rule = RecessionRule::nonpositive);

// ---------------------------------------------------------------------------
// Transform chains

struct LogShift {
    // Empty = use default_log_shift of the referenced variable's grid.
    std::optional<double> shift;
    bool operator==(const LogShift&) const = default;
};
struct FirstDiff {
    bool operator==(const FirstDiff&) const = default;
};
struct Shift {
    int offset = 0; // >0 lag, <0 lead
    bool operator==(const Shift&) const = default;
};

using Transform = std::variant<LogShift, FirstDiff, Shift>;

/// Reference to a dataset variable plus a finite transform chain applied
/// left to right. Lags and leads never cross entity boundaries.
struct SeriesRef {
    std::string variable;
    std::vector<Transform> chain;
    std::string label; // column name in design matrices; variable name if empty

    const std::string& name() const { return label.empty() ? variable : label; }
    bool operator==(const SeriesRef&) const = default;
};

Grid resolve(const SeriesRef& ref, const PanelDataset& data);
Series apply_chain(std::span<const Cell> series, const std::vector<Transform>& chain,
                   std::optional<double> variable_shift = std::nullopt);

} // namespace panelcurve
