#pragma once

#include <array>

#include "shm/preprocess/sample_table.hpp"

namespace shm::preprocess {

/// Per-feature mean of the observed cells.
struct ImputeStats {
    std::array<double, kFeatureCount> means{};

    friend bool operator==(const ImputeStats&, const ImputeStats&) = default;
};

/// Throws DataError naming any feature with no observed value.
ImputeStats fit_imputer(const SampleTable& table);

/// Replaces missing cells with the fitted means; observed cells are untouched.
SampleTable apply_imputer(const SampleTable& table, const ImputeStats& stats);
FeatureRow impute_row(const FeatureRow& row, const ImputeStats& stats);

}  // namespace shm::preprocess
