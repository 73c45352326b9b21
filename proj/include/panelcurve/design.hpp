#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "panelcurve/transforms.hpp"

namespace panelcurve {

enum class Effects { pooled, entity_fixed, two_way_fixed, random };
enum class ExpectationMode { backward, forward };

const char* to_string(Effects effects);
const char* to_string(ExpectationMode mode);
ExpectationMode expectation_mode_from_string(const std::string& name);

/// Interaction column: elementwise product of a regressor and a regime dummy.
struct InteractionSpec {
    std::size_t regressor = 0; // index into ModelSpec::regressors
    RegimeDummy dummy;
    std::string label; // defaults to "<regressor>:<dummy source>"
};

/// Declarative regression specification. Realized by build_design.
struct ModelSpec {
    SeriesRef regressand;
    std::vector<SeriesRef> regressors;
    std::vector<InteractionSpec> interactions;
    Effects effects = Effects::pooled;
    bool intercept = true;
    ExpectationMode expectation = ExpectationMode::backward;

    void validate() const; // throws UsageError on dangling interaction indices
};

/// Realized numeric regression: hole-free rows grouped by entity and
/// time-ordered within entity. Fixed-effects designs carry no entity dummies
/// (the within transform is applied by the estimator) but expose grouping.
struct DesignMatrix {
    struct RowId {
        std::uint32_t entity = 0; // index into `entities`
        std::uint32_t period = 0; // index into `periods`
        bool operator==(const RowId&) const = default;
    };

    std::vector<std::string> entities; // dataset entity codes
    std::vector<Quarter> periods;      // dataset period axis
    std::vector<RowId> rows;

    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    std::vector<std::string> column_names;
    bool has_intercept = false; // column 0 is the constant when true
    Effects effects = Effects::pooled;

    // Contiguous [start, end) row ranges per contributing entity, plus the
    // entity index each group belongs to.
    std::vector<std::size_t> group_offsets;  // size n_groups() + 1
    std::vector<std::size_t> group_entities; // size n_groups()

    // Rows lost to lags/holes, indexed like `entities`.
    std::vector<std::size_t> dropped_per_entity;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return static_cast<std::size_t>(X.cols()); }
    std::size_t n_groups() const { return group_entities.size(); }
    std::size_t group_size(std::size_t g) const { return group_offsets[g + 1] - group_offsets[g]; }
};

DesignMatrix build_design(const ModelSpec& spec, const PanelDataset& data);

} // namespace panelcurve
