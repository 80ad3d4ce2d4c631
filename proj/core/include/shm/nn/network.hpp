#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "shm/nn/feature_map.hpp"
#include "shm/nn/layers.hpp"

namespace shm::nn {

// Fixed architecture: Conv1D(32, 3, ReLU) -> MaxPool1D(2) -> Flatten
// -> Dense(16, ReLU) -> Dense(1, Sigmoid) on a single-channel length-6 input.
inline constexpr std::size_t kInputLength = 6;
inline constexpr std::size_t kInputChannels = 1;
inline constexpr std::size_t kConvFilters = 32;
inline constexpr std::size_t kKernelSize = 3;
inline constexpr std::size_t kPoolSize = 2;
inline constexpr std::size_t kConvLength = kInputLength - kKernelSize + 1;  // 4
inline constexpr std::size_t kPooledLength = kConvLength / kPoolSize;       // 2
inline constexpr std::size_t kFlatSize = kConvFilters * kPooledLength;      // 64
inline constexpr std::size_t kHiddenUnits = 16;
inline constexpr std::size_t kParameterTensorCount = 6;

/// One tensor per trainable parameter block, in the order
/// conv weights, conv biases, hidden weights, hidden biases, output weights, output biases.
struct GradientSet {
    std::array<std::vector<double>, kParameterTensorCount> tensors;

    std::size_t parameter_count() const;
    bool congruent_with(const GradientSet& other) const;
    void fill(double value);
    /// this += other
    void accumulate(const GradientSet& other);
    void scale(double factor);
};

/// Intermediate activations from one forward pass, kept for backpropagation.
struct ForwardTrace {
    FeatureMap input;
    FeatureMap conv_pre;
    FeatureMap conv_out;
    PooledMap pooled;
    std::vector<double> flat;
    std::vector<double> hidden_pre;
    std::vector<double> hidden_out;
    double output_pre = 0.0;
    double probability = 0.0;
    bool valid = false;
};

class Network {
public:
    /// All weights and biases zero.
    Network();

    /// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
    void initialize(std::mt19937_64& rng);

    /// Probability of the damaged class, strictly inside (0, 1).
    double forward(const FeatureMap& sample) const;
    ForwardTrace trace(const FeatureMap& sample) const;

    const Conv1DLayer& conv() const noexcept { return conv_; }
    const DenseLayer& hidden() const noexcept { return hidden_; }
    const DenseLayer& output() const noexcept { return output_; }
    Conv1DLayer& conv() noexcept { return conv_; }
    DenseLayer& hidden() noexcept { return hidden_; }
    DenseLayer& output() noexcept { return output_; }

    std::array<std::span<double>, kParameterTensorCount> parameter_tensors();
    std::array<std::span<const double>, kParameterTensorCount> parameter_tensors() const;

    /// Zero-valued gradient set shaped like this network's parameters.
    GradientSet zero_gradients() const;
    bool congruent_with(const GradientSet& grads) const;

    /// Throws ConfigError unless the layer dimensions form the fixed chain.
    void validate_shapes() const;

    friend bool operator==(const Network& a, const Network& b);

private:
    Conv1DLayer conv_;
    DenseLayer hidden_;
    DenseLayer output_;
};

/// Analytic gradient of the clamped binary cross-entropy w.r.t. every parameter.
/// ReLU uses subgradient 0 at 0; pooling routes to the recorded argmax.
GradientSet network_backward(const Network& net, const ForwardTrace& trace, int label);

}  // namespace shm::nn
