#include "shm/preprocess/imputer.hpp"

#include <string>

#include "shm/errors.hpp"

namespace shm::preprocess {

ImputeStats fit_imputer(const SampleTable& table) {
    std::array<double, kFeatureCount> sums{};
    std::array<std::size_t, kFeatureCount> counts{};
    for (const auto& r : table.rows) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            if (!is_missing(r.features[f])) {
                sums[f] += r.features[f];
                ++counts[f];
            }
        }
    }
    ImputeStats stats;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (counts[f] == 0) {
            throw DataError("feature '" + std::string(kFeatureNames[f]) + "' has no observed values");
        }
        stats.means[f] = sums[f] / static_cast<double>(counts[f]);
    }
    return stats;
}

FeatureRow impute_row(const FeatureRow& row, const ImputeStats& stats) {
    FeatureRow out = row;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (is_missing(out[f])) {
            out[f] = stats.means[f];
        }
    }
    return out;
}

SampleTable apply_imputer(const SampleTable& table, const ImputeStats& stats) {
    SampleTable out = table;
    for (auto& r : out.rows) {
        r.features = impute_row(r.features, stats);
    }
    return out;
}

}  // namespace shm::preprocess
