#include "shm/preprocess/reshape.hpp"

#include <string>
#include <vector>

#include "shm/errors.hpp"

namespace shm::preprocess {

nn::FeatureMap reshape_sample(std::span<const double> row) {
    if (row.size() != kFeatureCount) {
        throw DataError("sample row must have " + std::to_string(kFeatureCount) + " features, got " +
                        std::to_string(row.size()));
    }
    return nn::FeatureMap(1, kFeatureCount, std::vector<double>(row.begin(), row.end()));
}

FeatureRow sample_to_row(const nn::FeatureMap& sample) {
    if (sample.channels() != 1 || sample.length() != kFeatureCount) {
        throw DataError("sample must have shape (6, 1)");
    }
    FeatureRow row{};
    auto values = sample.channel(0);
    std::copy(values.begin(), values.end(), row.begin());
    return row;
}

}  // namespace shm::preprocess
