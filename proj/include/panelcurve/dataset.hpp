#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "panelcurve/quarter.hpp"

namespace panelcurve {

// A hole is an explicitly missing observation; it is never imputed.
using Cell = std::optional<double>;
using Series = std::vector<Cell>;

/// Entity-major storage for one variable: row i is entity i's full time
/// series over the dataset's period axis.
struct Grid {
    std::size_t n_entities = 0;
    std::size_t n_periods = 0;
    std::vector<Cell> cells; // n_entities * n_periods

    Grid() = default;
    Grid(std::size_t entities, std::size_t periods)
        : n_entities(entities), n_periods(periods), cells(entities * periods) {}

    Cell& at(std::size_t entity, std::size_t period) { return cells[entity * n_periods + period]; }
    const Cell& at(std::size_t entity, std::size_t period) const {
        return cells[entity * n_periods + period];
    }

    std::span<const Cell> row(std::size_t entity) const {
        return {cells.data() + entity * n_periods, n_periods};
    }
    void set_row(std::size_t entity, const Series& values);

    bool has_hole() const;
    bool operator==(const Grid&) const = default;
};

/// Entity×period panel of named series. Immutable after ingestion; every
/// operation downstream is a pure function of its inputs.
struct PanelDataset {
    std::vector<std::string> entities;     // sorted, unique codes
    std::vector<Quarter> periods;          // strictly increasing, gap-free
    std::map<std::string, Grid> series;    // variable name -> grid
    bool balanced = false;

    std::size_t n_entities() const { return entities.size(); }
    std::size_t n_periods() const { return periods.size(); }

    bool has_series(const std::string& name) const { return series.count(name) != 0; }
    const Grid& grid(const std::string& name) const; // throws DataError when absent
    std::size_t entity_index(const std::string& code) const; // throws DataError

    // True iff no series has a hole; recorded in `balanced` at ingestion.
    bool compute_balanced() const;

    bool operator==(const PanelDataset&) const = default;
};

// Longest contiguous hole-free span of a series: leading and trailing holes
// are trimmed; an interior hole inside the trimmed region is rejected.
struct SpanView {
    std::size_t offset = 0;
    std::vector<double> values;
};
SpanView contiguous_span(std::span<const Cell> series, const std::string& context);

// CSV schema, in column order after entity and period.
inline const std::vector<std::string>& standard_variables() {
    static const std::vector<std::string> names = {"cpi", "expected_cpi", "unemployment",
                                                   "gdp_growth"};
    return names;
}

} // namespace panelcurve
