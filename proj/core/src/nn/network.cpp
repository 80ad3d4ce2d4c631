#include "shm/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shm/errors.hpp"
#include "shm/nn/loss.hpp"

namespace shm::nn {

namespace {

void require_shape(const FeatureMap& map, std::size_t channels, std::size_t length,
                   const char* stage) {
    if (map.channels() != channels || map.length() != length) {
        throw ConfigError(std::string(stage) + " expected shape (length " + std::to_string(length) +
                          ", " + std::to_string(channels) + " channels), got (length " +
                          std::to_string(map.length()) + ", " + std::to_string(map.channels()) +
                          " channels)");
    }
}

void glorot_fill(std::vector<double>& weights, std::size_t fan_in, std::size_t fan_out,
                 std::mt19937_64& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : weights) {
        w = dist(rng);
    }
}

// Largest double below 1 and smallest positive normal: keeps the output
// strictly inside (0, 1) even when the logit saturates.
constexpr double kProbabilityCeiling = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kProbabilityFloor = std::numeric_limits<double>::min();

}  // namespace

std::size_t GradientSet::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors) {
        n += t.size();
    }
    return n;
}

bool GradientSet::congruent_with(const GradientSet& other) const {
    for (std::size_t i = 0; i < kParameterTensorCount; ++i) {
        if (tensors[i].size() != other.tensors[i].size()) {
            return false;
        }
    }
    return true;
}

void GradientSet::fill(double value) {
    for (auto& t : tensors) {
        std::fill(t.begin(), t.end(), value);
    }
}

void GradientSet::accumulate(const GradientSet& other) {
    if (!congruent_with(other)) {
        throw ConfigError("cannot accumulate gradient sets of different shapes");
    }
    for (std::size_t i = 0; i < kParameterTensorCount; ++i) {
        auto& dst = tensors[i];
        const auto& src = other.tensors[i];
        for (std::size_t j = 0; j < dst.size(); ++j) {
            dst[j] += src[j];
        }
    }
}

void GradientSet::scale(double factor) {
    for (auto& t : tensors) {
        for (double& v : t) {
            v *= factor;
        }
    }
}

Network::Network()
    : conv_(kConvFilters, kInputChannels, kKernelSize, Activation::Relu),
      hidden_(kFlatSize, kHiddenUnits, Activation::Relu),
      output_(kHiddenUnits, 1, Activation::Sigmoid) {
    validate_shapes();
}

void Network::initialize(std::mt19937_64& rng) {
    glorot_fill(conv_.weights, conv_.in_channels * conv_.kernel_size,
                conv_.filter_count * conv_.kernel_size, rng);
    std::fill(conv_.biases.begin(), conv_.biases.end(), 0.0);
    glorot_fill(hidden_.weights, hidden_.in_dim, hidden_.out_dim, rng);
    std::fill(hidden_.biases.begin(), hidden_.biases.end(), 0.0);
    glorot_fill(output_.weights, output_.in_dim, output_.out_dim, rng);
    std::fill(output_.biases.begin(), output_.biases.end(), 0.0);
}

void Network::validate_shapes() const {
    auto fail = [](const std::string& what) { throw ConfigError("network shape chain: " + what); };
    if (conv_.filter_count != kConvFilters || conv_.kernel_size != kKernelSize ||
        conv_.in_channels != kInputChannels) {
        fail("convolution must be 32 filters x kernel 3 over 1 channel");
    }
    if (conv_.weights.size() != kConvFilters * kInputChannels * kKernelSize ||
        conv_.biases.size() != kConvFilters) {
        fail("convolution parameter count");
    }
    if (hidden_.in_dim != kFlatSize || hidden_.out_dim != kHiddenUnits ||
        hidden_.weights.size() != kFlatSize * kHiddenUnits || hidden_.biases.size() != kHiddenUnits) {
        fail("hidden dense layer must map 64 -> 16");
    }
    if (output_.in_dim != kHiddenUnits || output_.out_dim != 1 || output_.weights.size() != kHiddenUnits ||
        output_.biases.size() != 1) {
        fail("output dense layer must map 16 -> 1");
    }
    if (conv_.activation != Activation::Relu || hidden_.activation != Activation::Relu ||
        output_.activation != Activation::Sigmoid) {
        fail("activations must be relu, relu, sigmoid");
    }
}

ForwardTrace Network::trace(const FeatureMap& sample) const {
    require_shape(sample, kInputChannels, kInputLength, "network input");
    ForwardTrace t;
    t.input = sample;
    t.conv_pre = conv1d_preactivation(sample, conv_);
    t.conv_out = t.conv_pre;
    for (double& v : t.conv_out.values()) {
        v = activate(Activation::Relu, v);
    }
    require_shape(t.conv_out, kConvFilters, kConvLength, "convolution output");
    t.pooled = maxpool1d_forward_indexed(t.conv_out, kPoolSize);
    require_shape(t.pooled.output, kConvFilters, kPooledLength, "pooling output");
    t.flat = flatten(t.pooled.output);
    t.hidden_pre = dense_preactivation(t.flat, hidden_);
    t.hidden_out.resize(t.hidden_pre.size());
    std::transform(t.hidden_pre.begin(), t.hidden_pre.end(), t.hidden_out.begin(),
                   [](double v) { return activate(Activation::Relu, v); });
    const auto logit = dense_preactivation(t.hidden_out, output_);
    t.output_pre = logit.at(0);
    t.probability =
        std::clamp(activate(Activation::Sigmoid, t.output_pre), kProbabilityFloor, kProbabilityCeiling);
    t.valid = true;
    return t;
}

double Network::forward(const FeatureMap& sample) const {
    return trace(sample).probability;
}

std::array<std::span<double>, kParameterTensorCount> Network::parameter_tensors() {
    return {std::span<double>(conv_.weights), std::span<double>(conv_.biases),
            std::span<double>(hidden_.weights), std::span<double>(hidden_.biases),
            std::span<double>(output_.weights), std::span<double>(output_.biases)};
}

std::array<std::span<const double>, kParameterTensorCount> Network::parameter_tensors() const {
    return {std::span<const double>(conv_.weights), std::span<const double>(conv_.biases),
            std::span<const double>(hidden_.weights), std::span<const double>(hidden_.biases),
            std::span<const double>(output_.weights), std::span<const double>(output_.biases)};
}

GradientSet Network::zero_gradients() const {
    GradientSet g;
    auto params = parameter_tensors();
    for (std::size_t i = 0; i < kParameterTensorCount; ++i) {
        g.tensors[i].assign(params[i].size(), 0.0);
    }
    return g;
}

bool Network::congruent_with(const GradientSet& grads) const {
    auto params = parameter_tensors();
    for (std::size_t i = 0; i < kParameterTensorCount; ++i) {
        if (params[i].size() != grads.tensors[i].size()) {
            return false;
        }
    }
    return true;
}

bool operator==(const Network& a, const Network& b) {
    auto pa = a.parameter_tensors();
    auto pb = b.parameter_tensors();
    for (std::size_t i = 0; i < kParameterTensorCount; ++i) {
        if (!std::equal(pa[i].begin(), pa[i].end(), pb[i].begin(), pb[i].end())) {
            return false;
        }
    }
    return true;
}

GradientSet network_backward(const Network& net, const ForwardTrace& trace, int label) {
    if (!trace.valid) {
        throw UsageError("network_backward needs the trace of a completed forward pass");
    }
    const auto& conv = net.conv();
    const auto& hidden = net.hidden();
    const auto& output = net.output();

    GradientSet g = net.zero_gradients();
    auto& g_conv_w = g.tensors[0];
    auto& g_conv_b = g.tensors[1];
    auto& g_hidden_w = g.tensors[2];
    auto& g_hidden_b = g.tensors[3];
    auto& g_out_w = g.tensors[4];
    auto& g_out_b = g.tensors[5];

    const double d_logit = bce_logit_gradient(label, trace.probability);
    for (std::size_t j = 0; j < kHiddenUnits; ++j) {
        g_out_w[j] = d_logit * trace.hidden_out[j];
    }
    g_out_b[0] = d_logit;

    std::vector<double> d_hidden_pre(kHiddenUnits);
    for (std::size_t k = 0; k < kHiddenUnits; ++k) {
        d_hidden_pre[k] = trace.hidden_pre[k] > 0.0 ? output.weight(0, k) * d_logit : 0.0;
    }

    std::vector<double> d_flat(kFlatSize, 0.0);
    for (std::size_t k = 0; k < kHiddenUnits; ++k) {
        const double d = d_hidden_pre[k];
        g_hidden_b[k] = d;
        if (d == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < kFlatSize; ++i) {
            g_hidden_w[k * kFlatSize + i] = d * trace.flat[i];
            d_flat[i] += hidden.weight(k, i) * d;
        }
    }

    // Unflatten and route each pooled gradient to its window winner.
    FeatureMap d_conv(kConvFilters, kConvLength);
    for (std::size_t c = 0; c < kConvFilters; ++c) {
        for (std::size_t j = 0; j < kPooledLength; ++j) {
            const std::size_t cell = c * kPooledLength + j;
            d_conv.at(c, trace.pooled.argmax[cell]) += d_flat[cell];
        }
    }

    for (std::size_t f = 0; f < kConvFilters; ++f) {
        for (std::size_t i = 0; i < kConvLength; ++i) {
            if (trace.conv_pre.at(f, i) <= 0.0) {
                continue;
            }
            const double d = d_conv.at(f, i);
            g_conv_b[f] += d;
            for (std::size_t c = 0; c < conv.in_channels; ++c) {
                for (std::size_t k = 0; k < conv.kernel_size; ++k) {
                    g_conv_w[(f * conv.in_channels + c) * conv.kernel_size + k] +=
                        d * trace.input.at(c, i + k);
                }
            }
        }
    }
    return g;
}

}  // namespace shm::nn
