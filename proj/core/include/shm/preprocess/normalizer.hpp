#pragma once

#include <array>

#include "shm/preprocess/sample_table.hpp"

namespace shm::preprocess {

/// Per-feature min/max of the fitting partition.
struct NormStats {
    std::array<double, kFeatureCount> min{};
    std::array<double, kFeatureCount> max{};

    friend bool operator==(const NormStats&, const NormStats&) = default;
};

/// Expects an imputed table; throws DataError on an empty table or missing cells.
NormStats fit_normalizer(const SampleTable& table);

/// (x - min) / (max - min); a constant feature (max == min) maps to 0.
/// Values outside the fitted range are passed through unclipped.
SampleTable apply_normalizer(const SampleTable& table, const NormStats& stats);
FeatureRow normalize_row(const FeatureRow& row, const NormStats& stats);

}  // namespace shm::preprocess
