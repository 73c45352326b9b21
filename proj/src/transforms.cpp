#include "panelcurve/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "panelcurve/errors.hpp"

namespace panelcurve {

double log_shift(double x, double c) {
    if (!(x + c > 0.0))
        throw NumericError("log_shift: x + c = " + std::to_string(x + c) + " is not positive");
    return std::log(x + c);
}

double default_log_shift(std::span<const Cell> values) {
    double min = std::numeric_limits<double>::infinity();
    for (const Cell& c : values)
        if (c.has_value()) min = std::min(min, *c);
    if (!std::isfinite(min)) return 1.0; // all holes; shift is inert
    return std::max(0.0, -min) + 1.0;
}

double default_log_shift(const Grid& grid) {
    return default_log_shift(std::span<const Cell>(grid.cells));
}

Series first_diff(std::span<const Cell> series) {
    Series out(series.size());
    for (std::size_t t = 1; t < series.size(); ++t)
        if (series[t].has_value() && series[t - 1].has_value())
            out[t] = *series[t] - *series[t - 1];
    return out;
}

Series shift(std::span<const Cell> series, int k) {
    Series out(series.size());
    const long n = static_cast<long>(series.size());
    for (long t = 0; t < n; ++t) {
        long s = t - k;
        if (s >= 0 && s < n) out[t] = series[s];
    }
    return out;
}

namespace {

template <typename Fn>
Grid per_entity(const Grid& grid, Fn&& fn) {
    Grid out(grid.n_entities, grid.n_periods);
    for (std::size_t e = 0; e < grid.n_entities; ++e) out.set_row(e, fn(grid.row(e)));
    return out;
}

} // namespace

Grid first_diff(const Grid& grid) {
    return per_entity(grid, [](std::span<const Cell> row) { return first_diff(row); });
}

Grid shift(const Grid& grid, int k) {
    return per_entity(grid, [k](std::span<const Cell> row) { return shift(row, k); });
}

const char* to_string(RecessionRule rule) {
    return rule == RecessionRule::nonpositive ? "nonpositive" : "negative";
}

RecessionRule recession_rule_from_string(const std::string& name) {
    if (name == "nonpositive") return RecessionRule::nonpositive;
    if (name == "negative") return RecessionRule::negative;
    throw ConfigError("unknown recession_rule '" + name + "' (nonpositive|negative)");
}

Series recession_dummy(std::span<const Cell> growth, RecessionRule rule) {
    Series out(growth.size());
    for (std::size_t t = 0; t < growth.size(); ++t) {
        if (!growth[t].has_value()) continue;
        bool rec = rule == RecessionRule::nonpositive ? *growth[t] <= 0.0 : *growth[t] < 0.0;
        out[t] = rec ? 1.0 : 0.0;
    }
    return out;
}

RegimeDummy recession_dummy(const Grid& growth, RecessionRule rule, const std::string& source) {
    RegimeDummy dummy;
    dummy.indicator =
        per_entity(growth, [rule](std::span<const Cell> row) { return recession_dummy(row, rule); });
    dummy.source = source;
    dummy.rule = rule;
    return dummy;
}

Series apply_chain(std::span<const Cell> series, const std::vector<Transform>& chain,
                   std::optional<double> variable_shift) {
    Series cur(series.begin(), series.end());
    for (const Transform& tf : chain) {
        if (const auto* ls = std::get_if<LogShift>(&tf)) {
            double c = ls->shift ? *ls->shift
                                 : (variable_shift ? *variable_shift : default_log_shift(cur));
            for (Cell& cell : cur)
                if (cell.has_value()) cell = log_shift(*cell, c);
        } else if (std::holds_alternative<FirstDiff>(tf)) {
            cur = first_diff(cur);
        } else {
            cur = shift(std::span<const Cell>(cur), std::get<Shift>(tf).offset);
        }
    }
    return cur;
}

Grid resolve(const SeriesRef& ref, const PanelDataset& data) {
    const Grid& base = data.grid(ref.variable);
    // The default log-shift constant is per variable, computed once over the
    // whole grid so every entity is shifted identically.
    std::optional<double> variable_shift;
    for (const Transform& tf : ref.chain)
        if (const auto* ls = std::get_if<LogShift>(&tf); ls && !ls->shift) {
            variable_shift = default_log_shift(base);
            break;
        }
    Grid out(base.n_entities, base.n_periods);
    for (std::size_t e = 0; e < base.n_entities; ++e)
        out.set_row(e, apply_chain(base.row(e), ref.chain, variable_shift));
    return out;
}

} // namespace panelcurve
