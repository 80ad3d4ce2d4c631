#include "shm/nn/trainer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "shm/errors.hpp"

namespace shm::nn {

void check_binary_labels(const LabeledSet& data) {
    if (data.labels.size() != data.samples.size()) {
        throw DataError("labeled set has " + std::to_string(data.samples.size()) + " samples but " +
                        std::to_string(data.labels.size()) + " labels");
    }
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        if (data.labels[i] != 0 && data.labels[i] != 1) {
            throw DataError("row " + std::to_string(i) + " has non-binary label " +
                            std::to_string(data.labels[i]));
        }
    }
}

SetScore score(const Network& net, const LabeledSet& data, double threshold, double bce_clip) {
    if (data.empty()) {
        throw UsageError("cannot score an empty set");
    }
    double loss = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double p = net.forward(data.samples[i]);
        loss += bce_loss(data.labels[i], p, bce_clip);
        if (classify(p, threshold) == data.labels[i]) {
            ++correct;
        }
    }
    const double n = static_cast<double>(data.size());
    return {loss / n, static_cast<double>(correct) / n};
}

TrainResult train(Network& net, const LabeledSet& training, const LabeledSet* validation,
                  const TrainOptions& options, std::mt19937_64& rng) {
    if (training.empty()) {
        throw UsageError("training set is empty");
    }
    if (options.batch_size == 0) {
        throw ConfigError("batch size must be positive");
    }
    check_binary_labels(training);
    const bool has_validation = validation != nullptr && !validation->empty();
    if (has_validation) {
        check_binary_labels(*validation);
    }

    TrainResult result{{}, AdamState(net, options.adam)};
    std::vector<std::size_t> order(training.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    GradientSet batch_grad = net.zero_gradients();

    for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
            const std::size_t end = std::min(order.size(), start + options.batch_size);
            batch_grad.fill(0.0);
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t row = order[b];
                const auto trace = net.trace(training.samples[row]);
                batch_grad.accumulate(network_backward(net, trace, training.labels[row]));
            }
            batch_grad.scale(1.0 / static_cast<double>(end - start));
            adam_step(net, batch_grad, result.optimizer);
        }

        EpochMetrics m;
        m.epoch = epoch;
        const auto train_score = score(net, training, options.threshold, options.bce_clip);
        m.train_loss = train_score.mean_loss;
        m.train_accuracy = train_score.accuracy;
        if (has_validation) {
            const auto val_score = score(net, *validation, options.threshold, options.bce_clip);
            m.validation_loss = val_score.mean_loss;
            m.validation_accuracy = val_score.accuracy;
        } else {
            m.validation_loss = std::numeric_limits<double>::quiet_NaN();
            m.validation_accuracy = std::numeric_limits<double>::quiet_NaN();
        }
        result.history.push_back(m);
    }
    return result;
}

}  // namespace shm::nn
