#include "shm/preprocess/normalizer.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "shm/errors.hpp"

namespace shm::preprocess {

NormStats fit_normalizer(const SampleTable& table) {
    if (table.empty()) {
        throw DataError("cannot fit normalizer on an empty table");
    }
    NormStats stats;
    stats.min.fill(std::numeric_limits<double>::infinity());
    stats.max.fill(-std::numeric_limits<double>::infinity());
    for (const auto& r : table.rows) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const double v = r.features[f];
            if (is_missing(v)) {
                throw DataError("normalizer fit on unimputed data: feature '" +
                                std::string(kFeatureNames[f]) + "' has a missing cell");
            }
            stats.min[f] = std::min(stats.min[f], v);
            stats.max[f] = std::max(stats.max[f], v);
        }
    }
    return stats;
}

FeatureRow normalize_row(const FeatureRow& row, const NormStats& stats) {
    FeatureRow out{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const double range = stats.max[f] - stats.min[f];
        out[f] = range > 0.0 ? (row[f] - stats.min[f]) / range : 0.0;
    }
    return out;
}

SampleTable apply_normalizer(const SampleTable& table, const NormStats& stats) {
    SampleTable out = table;
    for (auto& r : out.rows) {
        r.features = normalize_row(r.features, stats);
    }
    return out;
}

}  // namespace shm::preprocess
