#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shm/nn/feature_map.hpp"

namespace shm::nn {

enum class Activation { Identity, Relu, Sigmoid };

double activate(Activation activation, double x);
const char* activation_name(Activation activation);
Activation activation_from_name(const std::string& name);

/// Valid-padding, stride-1 1D convolution. Weights are laid out
/// [filter][in_channel][tap].
struct Conv1DLayer {
    Conv1DLayer() = default;
    Conv1DLayer(std::size_t filter_count, std::size_t in_channels, std::size_t kernel_size,
                Activation activation = Activation::Relu);

    std::size_t filter_count = 0;
    std::size_t in_channels = 0;
    std::size_t kernel_size = 0;
    Activation activation = Activation::Relu;
    std::vector<double> weights;
    std::vector<double> biases;

    double& weight(std::size_t f, std::size_t c, std::size_t k) {
        return weights[(f * in_channels + c) * kernel_size + k];
    }
    double weight(std::size_t f, std::size_t c, std::size_t k) const {
        return weights[(f * in_channels + c) * kernel_size + k];
    }

    std::size_t output_length(std::size_t input_length) const;
};

/// Fully connected layer, weights row-major [out][in].
struct DenseLayer {
    DenseLayer() = default;
    DenseLayer(std::size_t in_dim, std::size_t out_dim, Activation activation);

    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    Activation activation = Activation::Relu;
    std::vector<double> weights;
    std::vector<double> biases;

    double& weight(std::size_t out, std::size_t in) { return weights[out * in_dim + in]; }
    double weight(std::size_t out, std::size_t in) const { return weights[out * in_dim + in]; }
};

/// Weighted sums plus bias, before the activation.
FeatureMap conv1d_preactivation(const FeatureMap& input, const Conv1DLayer& layer);
FeatureMap conv1d_forward(const FeatureMap& input, const Conv1DLayer& layer);

struct PooledMap {
    FeatureMap output;
    /// For each output cell (channel-major), the input position that won the window.
    std::vector<std::size_t> argmax;
};

/// Non-overlapping max pooling (stride == pool size). A trailing partial
/// window is dropped; ties resolve to the first maximal position.
PooledMap maxpool1d_forward_indexed(const FeatureMap& input, std::size_t pool_size = 2);
FeatureMap maxpool1d_forward(const FeatureMap& input, std::size_t pool_size = 2);

std::vector<double> dense_preactivation(std::span<const double> input, const DenseLayer& layer);
std::vector<double> dense_forward(std::span<const double> input, const DenseLayer& layer);

}  // namespace shm::nn
