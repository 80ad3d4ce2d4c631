#include "shm/nn/feature_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shm/errors.hpp"

namespace shm::nn {

FeatureMap::FeatureMap(std::size_t channels, std::size_t length, double fill)
    : channels_(channels), length_(length), values_(channels * length, fill) {}

FeatureMap::FeatureMap(std::size_t channels, std::size_t length, std::vector<double> values)
    : channels_(channels), length_(length), values_(std::move(values)) {
    if (values_.size() != channels * length) {
        throw ConfigError("feature map expects " + std::to_string(channels * length) +
                          " values for shape (" + std::to_string(channels) + " channels, length " +
                          std::to_string(length) + "), got " + std::to_string(values_.size()));
    }
}

bool FeatureMap::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> flatten(const FeatureMap& input) {
    auto values = input.values();
    return {values.begin(), values.end()};
}

FeatureMap unflatten(std::span<const double> flat, std::size_t channels, std::size_t length) {
    return FeatureMap(channels, length, std::vector<double>(flat.begin(), flat.end()));
}

}  // namespace shm::nn
