#include <benchmark/benchmark.h>

#include <random>

#include "shm/nn/network.hpp"
#include "shm/nn/adam.hpp"

namespace {

shm::nn::FeatureMap sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(shm::nn::kInputLength);
    for (auto& x : v) x = u(rng);
    return shm::nn::FeatureMap(1, shm::nn::kInputLength, std::move(v));
}

void BM_Forward(benchmark::State& state) {
    std::mt19937_64 rng(1);
    shm::nn::Network net;
    net.initialize(rng);
    const auto x = sample(rng);
    for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_Forward);

void BM_ForwardBackward(benchmark::State& state) {
    std::mt19937_64 rng(2);
    shm::nn::Network net;
    net.initialize(rng);
    const auto x = sample(rng);
    for (auto _ : state) {
        auto g = shm::nn::network_backward(net, net.trace(x), 1);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_ForwardBackward);

void BM_AdamStep(benchmark::State& state) {
    std::mt19937_64 rng(3);
    shm::nn::Network net;
    net.initialize(rng);
    const auto g = shm::nn::network_backward(net, net.trace(sample(rng)), 0);
    shm::nn::AdamState adam(net, shm::nn::AdamConfig{});
    for (auto _ : state) shm::nn::adam_step(net, g, adam);
}
BENCHMARK(BM_AdamStep);

}  // namespace
