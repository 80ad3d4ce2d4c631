#include "shm/nn/layers.hpp"

#include <cmath>
#include <string>

#include "shm/errors.hpp"

namespace shm::nn {

namespace {

std::string dims(std::size_t channels, std::size_t length) {
    return "(" + std::to_string(channels) + " channels, length " + std::to_string(length) + ")";
}

double sigmoid(double x) {
    // Evaluated on the side that cannot overflow.
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

double activate(Activation activation, double x) {
    switch (activation) {
        case Activation::Identity:
            return x;
        case Activation::Relu:
            return x > 0.0 ? x : 0.0;
        case Activation::Sigmoid:
            return sigmoid(x);
    }
    return x;
}

const char* activation_name(Activation activation) {
    switch (activation) {
        case Activation::Identity:
            return "identity";
        case Activation::Relu:
            return "relu";
        case Activation::Sigmoid:
            return "sigmoid";
    }
    return "identity";
}

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "relu") return Activation::Relu;
    if (name == "sigmoid") return Activation::Sigmoid;
    throw ConfigError("unknown activation '" + name + "'");
}

Conv1DLayer::Conv1DLayer(std::size_t filters, std::size_t channels, std::size_t kernel,
                         Activation act)
    : filter_count(filters),
      in_channels(channels),
      kernel_size(kernel),
      activation(act),
      weights(filters * channels * kernel, 0.0),
      biases(filters, 0.0) {
    if (filters == 0 || channels == 0 || kernel == 0) {
        throw ConfigError("convolution dimensions must be positive");
    }
}

std::size_t Conv1DLayer::output_length(std::size_t input_length) const {
    if (input_length < kernel_size) {
        throw ConfigError("convolution input length " + std::to_string(input_length) +
                          " is shorter than kernel size " + std::to_string(kernel_size));
    }
    return input_length - kernel_size + 1;
}

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Activation act)
    : in_dim(in), out_dim(out), activation(act), weights(in * out, 0.0), biases(out, 0.0) {
    if (in == 0 || out == 0) {
        throw ConfigError("dense dimensions must be positive");
    }
}

FeatureMap conv1d_preactivation(const FeatureMap& input, const Conv1DLayer& layer) {
    if (input.channels() != layer.in_channels) {
        throw ConfigError("convolution expected " + std::to_string(layer.in_channels) +
                          " input channels, got input " + dims(input.channels(), input.length()));
    }
    const std::size_t out_len = layer.output_length(input.length());
    FeatureMap out(layer.filter_count, out_len);
    for (std::size_t f = 0; f < layer.filter_count; ++f) {
        auto row = out.channel(f);
        for (std::size_t i = 0; i < out_len; ++i) {
            double sum = layer.biases[f];
            for (std::size_t c = 0; c < layer.in_channels; ++c) {
                auto in = input.channel(c);
                for (std::size_t k = 0; k < layer.kernel_size; ++k) {
                    sum += layer.weight(f, c, k) * in[i + k];
                }
            }
            row[i] = sum;
        }
    }
    return out;
}

FeatureMap conv1d_forward(const FeatureMap& input, const Conv1DLayer& layer) {
    FeatureMap out = conv1d_preactivation(input, layer);
    for (double& v : out.values()) {
        v = activate(layer.activation, v);
    }
    return out;
}

PooledMap maxpool1d_forward_indexed(const FeatureMap& input, std::size_t pool_size) {
    if (pool_size == 0) {
        throw ConfigError("pool size must be positive");
    }
    if (input.length() < pool_size) {
        throw ConfigError("max pooling needs length >= " + std::to_string(pool_size) + ", got input " +
                          dims(input.channels(), input.length()));
    }
    const std::size_t out_len = input.length() / pool_size;
    PooledMap result{FeatureMap(input.channels(), out_len), {}};
    result.argmax.resize(input.channels() * out_len);
    for (std::size_t c = 0; c < input.channels(); ++c) {
        auto in = input.channel(c);
        for (std::size_t j = 0; j < out_len; ++j) {
            std::size_t best = j * pool_size;
            for (std::size_t p = best + 1; p < (j + 1) * pool_size; ++p) {
                if (in[p] > in[best]) {
                    best = p;
                }
            }
            result.output.at(c, j) = in[best];
            result.argmax[c * out_len + j] = best;
        }
    }
    return result;
}

FeatureMap maxpool1d_forward(const FeatureMap& input, std::size_t pool_size) {
    return maxpool1d_forward_indexed(input, pool_size).output;
}

std::vector<double> dense_preactivation(std::span<const double> input, const DenseLayer& layer) {
    if (input.size() != layer.in_dim) {
        throw ConfigError("dense layer expected input dimension " + std::to_string(layer.in_dim) +
                          ", got " + std::to_string(input.size()));
    }
    std::vector<double> out(layer.out_dim);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
        double sum = layer.biases[o];
        const double* w = layer.weights.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) {
            sum += w[i] * input[i];
        }
        out[o] = sum;
    }
    return out;
}

std::vector<double> dense_forward(std::span<const double> input, const DenseLayer& layer) {
    auto out = dense_preactivation(input, layer);
    for (double& v : out) {
        v = activate(layer.activation, v);
    }
    return out;
}

}  // namespace shm::nn
