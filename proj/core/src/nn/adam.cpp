#include "shm/nn/adam.hpp"

#include <cmath>

#include "shm/errors.hpp"

namespace shm::nn {

AdamState::AdamState(const Network& net, AdamConfig cfg)
    : config(cfg), first_moment(net.zero_gradients()), second_moment(net.zero_gradients()) {}

void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> first_moment, std::span<double> second_moment,
                 const AdamConfig& config, std::uint64_t step) {
    if (grads.size() != params.size() || first_moment.size() != params.size() ||
        second_moment.size() != params.size()) {
        throw ConfigError("adam update: tensor of " + std::to_string(params.size()) +
                          " parameters given " + std::to_string(grads.size()) + " gradients");
    }
    if (step == 0) {
        throw UsageError("adam update step index is 1-based");
    }
    const double t = static_cast<double>(step);
    const double correction1 = 1.0 - std::pow(config.beta1, t);
    const double correction2 = 1.0 - std::pow(config.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        first_moment[i] = config.beta1 * first_moment[i] + (1.0 - config.beta1) * g;
        second_moment[i] = config.beta2 * second_moment[i] + (1.0 - config.beta2) * g * g;
        const double m_hat = first_moment[i] / correction1;
        const double v_hat = second_moment[i] / correction2;
        params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
}

void adam_step(Network& net, const GradientSet& grads, AdamState& state) {
    if (!net.congruent_with(grads) || !net.congruent_with(state.first_moment) ||
        !net.congruent_with(state.second_moment)) {
        throw ConfigError("adam step: gradient or moment shapes do not match the network");
    }
    state.step += 1;
    auto params = net.parameter_tensors();
    for (std::size_t i = 0; i < kParameterTensorCount; ++i) {
        adam_update(params[i], grads.tensors[i], state.first_moment.tensors[i],
                    state.second_moment.tensors[i], state.config, state.step);
    }
}

}  // namespace shm::nn
