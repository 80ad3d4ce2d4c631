#pragma once

#include <span>

#include "shm/nn/feature_map.hpp"
#include "shm/preprocess/sample_table.hpp"

namespace shm::preprocess {

/// Lays a normalized row [ch1, ch2, ch3, ch4, ch5, time] along the length
/// axis of a single-channel map. The order matters: the kernel spans
/// neighbouring features. Throws DataError unless the row has six values.
nn::FeatureMap reshape_sample(std::span<const double> row);

FeatureRow sample_to_row(const nn::FeatureMap& sample);

}  // namespace shm::preprocess
