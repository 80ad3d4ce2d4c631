#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "shm/nn/adam.hpp"
#include "shm/nn/feature_map.hpp"
#include "shm/nn/loss.hpp"
#include "shm/nn/network.hpp"

namespace shm::nn {

inline constexpr double kDecisionThreshold = 0.5;

/// Inputs with binary labels, aligned by index.
struct LabeledSet {
    std::vector<FeatureMap> samples;
    std::vector<int> labels;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }
};

struct TrainOptions {
    std::size_t epochs = 10;
    std::size_t batch_size = 16;
    AdamConfig adam;
    double bce_clip = kDefaultBceClip;
    double threshold = kDecisionThreshold;
};

struct EpochMetrics {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double validation_loss = 0.0;
    double validation_accuracy = 0.0;
};

struct SetScore {
    double mean_loss = 0.0;
    double accuracy = 0.0;
};

/// Probabilities at or above the threshold are called damaged (1).
inline int classify(double probability, double threshold = kDecisionThreshold) {
    return probability >= threshold ? 1 : 0;
}

/// Mean loss and accuracy with frozen weights. Throws UsageError on an empty set.
SetScore score(const Network& net, const LabeledSet& data, double threshold = kDecisionThreshold,
               double bce_clip = kDefaultBceClip);

struct TrainResult {
    std::vector<EpochMetrics> history;
    AdamState optimizer;
};

/// Mini-batch Adam training. Each epoch reshuffles with `rng`, averages
/// per-sample gradients inside a batch and applies one step per batch.
/// Metrics are computed after every epoch on the full train and validation sets;
/// validation columns are NaN when `validation` is null or empty.
TrainResult train(Network& net, const LabeledSet& training, const LabeledSet* validation,
                  const TrainOptions& options, std::mt19937_64& rng);

/// Throws DataError naming the first row whose label is not 0 or 1.
void check_binary_labels(const LabeledSet& data);

}  // namespace shm::nn
