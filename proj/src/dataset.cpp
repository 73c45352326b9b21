#include "panelcurve/dataset.hpp"

#include <algorithm>

#include "panelcurve/errors.hpp"

namespace panelcurve {

void Grid::set_row(std::size_t entity, const Series& values) {
    std::copy(values.begin(), values.end(), cells.begin() + entity * n_periods);
}

bool Grid::has_hole() const {
    return std::any_of(cells.begin(), cells.end(), [](const Cell& c) { return !c.has_value(); });
}

const Grid& PanelDataset::grid(const std::string& name) const {
    auto it = series.find(name);
    if (it == series.end()) throw DataError("unknown series '" + name + "'");
    return it->second;
}

std::size_t PanelDataset::entity_index(const std::string& code) const {
    auto it = std::lower_bound(entities.begin(), entities.end(), code);
    if (it == entities.end() || *it != code) throw DataError("unknown entity '" + code + "'");
    return static_cast<std::size_t>(it - entities.begin());
}

bool PanelDataset::compute_balanced() const {
    for (const auto& [name, grid] : series)
        if (grid.has_hole()) return false;
    return true;
}

SpanView contiguous_span(std::span<const Cell> series, const std::string& context) {
    std::size_t first = 0;
    while (first < series.size() && !series[first].has_value()) ++first;
    std::size_t last = series.size();
    while (last > first && !series[last - 1].has_value()) --last;
    if (first == last) throw DataError(context + ": series is all holes");

    SpanView span;
    span.offset = first;
    span.values.reserve(last - first);
    for (std::size_t t = first; t < last; ++t) {
        if (!series[t].has_value())
            throw DataError(context + ": interior hole at position " + std::to_string(t));
        span.values.push_back(*series[t]);
    }
    return span;
}

} // namespace panelcurve
