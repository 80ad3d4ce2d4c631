#pragma once

#include <cstdint>
#include <span>

#include "shm/nn/network.hpp"

namespace shm::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamState() = default;
    AdamState(const Network& net, AdamConfig cfg);

    AdamConfig config;
    GradientSet first_moment;
    GradientSet second_moment;
    std::uint64_t step = 0;
};

/// Bias-corrected Adam update of one tensor. `step` is the 1-based step
/// index after incrementing. Parameters move against the gradient.
void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> first_moment, std::span<double> second_moment,
                 const AdamConfig& config, std::uint64_t step);

/// One optimizer step over all network tensors; increments state.step by one.
void adam_step(Network& net, const GradientSet& grads, AdamState& state);

}  // namespace shm::nn
