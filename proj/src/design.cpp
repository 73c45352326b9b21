#include "panelcurve/design.hpp"

#include <algorithm>

#include "panelcurve/errors.hpp"

namespace panelcurve {

const char* to_string(Effects effects) {
    switch (effects) {
        case Effects::pooled: return "pooled";
        case Effects::entity_fixed: return "fixed";
        case Effects::two_way_fixed: return "two_way_fixed";
        case Effects::random: return "random";
    }
    return "?";
}

const char* to_string(ExpectationMode mode) {
    return mode == ExpectationMode::backward ? "backward" : "forward";
}

ExpectationMode expectation_mode_from_string(const std::string& name) {
    if (name == "backward") return ExpectationMode::backward;
    if (name == "forward") return ExpectationMode::forward;
    throw ConfigError("unknown expectation mode '" + name + "' (backward|forward)");
}

void ModelSpec::validate() const {
    for (const auto& inter : interactions)
        if (inter.regressor >= regressors.size())
            throw UsageError("interaction references regressor " + std::to_string(inter.regressor) +
                             " but only " + std::to_string(regressors.size()) + " exist");
}

DesignMatrix build_design(const ModelSpec& spec, const PanelDataset& data) {
    spec.validate();

    const std::size_t n_entities = data.n_entities();
    const std::size_t n_periods = data.n_periods();

    Grid y_grid = resolve(spec.regressand, data);
    std::vector<Grid> reg_grids;
    reg_grids.reserve(spec.regressors.size());
    for (const auto& ref : spec.regressors) reg_grids.push_back(resolve(ref, data));

    // Column layout: [const] regressors... interactions...
    const bool with_const = spec.intercept && spec.effects != Effects::entity_fixed &&
                            spec.effects != Effects::two_way_fixed;
    std::vector<std::string> names;
    if (with_const) names.push_back("const");
    for (const auto& ref : spec.regressors) names.push_back(ref.name());
    for (const auto& inter : spec.interactions) {
        std::string label = inter.label.empty()
                                ? spec.regressors[inter.regressor].name() + ":" + inter.dummy.source
                                : inter.label;
        names.push_back(label);
    }

    // A usable row needs the regressand, every regressor, and every dummy a
    // requested interaction touches; rows with any hole are dropped listwise.
    DesignMatrix design;
    design.entities = data.entities;
    design.periods = data.periods;
    design.column_names = names;
    design.has_intercept = with_const;
    design.effects = spec.effects;
    design.dropped_per_entity.assign(n_entities, 0);

    std::vector<DesignMatrix::RowId> rows;
    for (std::size_t e = 0; e < n_entities; ++e) {
        for (std::size_t t = 0; t < n_periods; ++t) {
            bool usable = y_grid.at(e, t).has_value();
            for (const Grid& g : reg_grids) usable = usable && g.at(e, t).has_value();
            for (const auto& inter : spec.interactions)
                usable = usable && inter.dummy.indicator.at(e, t).has_value();
            if (usable)
                rows.push_back({static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(t)});
            else
                ++design.dropped_per_entity[e];
        }
    }
    if (rows.empty()) throw DataError("build_design: no usable rows after hole/lag drops");

    const std::size_t n = rows.size();
    const std::size_t k = names.size();
    design.rows = std::move(rows);
    design.y.resize(n);
    design.X.resize(n, k);

    for (std::size_t r = 0; r < n; ++r) {
        const auto [e, t] = design.rows[r];
        design.y(r) = *y_grid.at(e, t);
        std::size_t col = 0;
        if (with_const) design.X(r, col++) = 1.0;
        for (const Grid& g : reg_grids) design.X(r, col++) = *g.at(e, t);
        for (const auto& inter : spec.interactions)
            design.X(r, col++) =
                *reg_grids[inter.regressor].at(e, t) * *inter.dummy.indicator.at(e, t);
    }

    // Entity grouping; rows were generated entity-major and time-ordered.
    for (std::size_t r = 0; r < n; ++r) {
        if (r == 0 || design.rows[r].entity != design.rows[r - 1].entity) {
            design.group_offsets.push_back(r);
            design.group_entities.push_back(design.rows[r].entity);
        }
    }
    design.group_offsets.push_back(n);

    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if ((design.X.col(a).array() == design.X.col(b).array()).all())
                throw NumericError("build_design: column '" + names[b] +
                                   "' exactly duplicates column '" + names[a] + "'");

    return design;
}

} // namespace panelcurve
