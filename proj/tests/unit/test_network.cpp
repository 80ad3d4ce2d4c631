#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shm/errors.hpp"
#include "shm/nn/loss.hpp"
#include "shm/nn/network.hpp"

using namespace shm;
using namespace shm::nn;

TEST(Network, ShapeChain) {
    std::mt19937_64 rng(1);
    Network net;
    net.initialize(rng);
    const ForwardTrace t = net.trace(oracle::random_sample(rng));
    EXPECT_EQ(t.input.channels(), 1u);
    EXPECT_EQ(t.input.length(), 6u);
    EXPECT_EQ(t.conv_out.channels(), 32u);
    EXPECT_EQ(t.conv_out.length(), 4u);
    EXPECT_EQ(t.pooled.output.channels(), 32u);
    EXPECT_EQ(t.pooled.output.length(), 2u);
    EXPECT_EQ(t.flat.size(), 64u);
    EXPECT_EQ(t.hidden_out.size(), 16u);
    EXPECT_TRUE(t.valid);
    EXPECT_NO_THROW(net.validate_shapes());
}

TEST(Network, WrongInputShapeIsConfigError) {
    Network net;
    EXPECT_THROW(net.forward(FeatureMap(1, 5)), ConfigError);
    EXPECT_THROW(net.forward(FeatureMap(2, 6)), ConfigError);
}

TEST(Network, BrokenChainIsRejected) {
    Network net;
    net.hidden() = DenseLayer(63, 16, Activation::Relu);
    EXPECT_THROW(net.validate_shapes(), ConfigError);
}

TEST(Network, ZeroWeightsGiveOneHalf) {
    Network net;
    EXPECT_EQ(net.forward(FeatureMap(1, 6, std::vector<double>{1, 2, 3, 4, 5, 6})), 0.5);
}

TEST(Network, ComposesLayerOracles) {
    std::mt19937_64 rng(77);
    const Network net = oracle::random_network(77);
    for (int rep = 0; rep < 10; ++rep) {
        const FeatureMap x = oracle::random_sample(rng, -1, 2);
        oracle::Grid in{std::vector<double>(x.values().begin(), x.values().end())};
        std::vector<oracle::Grid> cw(32, oracle::Grid(1, std::vector<double>(3)));
        for (std::size_t f = 0; f < 32; ++f) {
            for (std::size_t k = 0; k < 3; ++k) cw[f][0][k] = net.conv().weight(f, 0, k);
        }
        const auto conv = oracle::conv_oracle(in, cw, net.conv().biases, true);
        const auto pooled = oracle::pool_oracle(conv, 2);
        std::vector<double> flat;
        for (const auto& ch : pooled) flat.insert(flat.end(), ch.begin(), ch.end());
        oracle::Grid hw(16, std::vector<double>(64));
        for (std::size_t o = 0; o < 16; ++o) {
            for (std::size_t i = 0; i < 64; ++i) hw[o][i] = net.hidden().weight(o, i);
        }
        const auto hidden = oracle::dense_oracle(flat, hw, net.hidden().biases, oracle::Act::Relu);
        oracle::Grid ow(1, std::vector<double>(16));
        for (std::size_t i = 0; i < 16; ++i) ow[0][i] = net.output().weight(0, i);
        const auto out = oracle::dense_oracle(hidden, ow, net.output().biases, oracle::Act::Sigmoid);
        EXPECT_NEAR(net.forward(x), out[0], 1e-12);
    }
}

TEST(Network, GoldenOutput) {
    std::mt19937_64 rng(20240601);
    Network net;
    net.initialize(rng);
    const FeatureMap x(1, 6, std::vector<double>{0.1, 0.9, 0.3, 0.7, 0.5, 0.25});
    EXPECT_NEAR(net.forward(x), 0.44506943491441781, 1e-15);
}

TEST(Network, OutputStrictlyInsideUnitInterval) {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        const Network net = oracle::random_network(1000 + static_cast<std::uint64_t>(rep));
        const double p = net.forward(oracle::random_sample(rng, -1e3, 1e3));
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, 1.0);
    }
}

TEST(Network, InitializationIsDeterministicAndBounded) {
    std::mt19937_64 a(5), b(5);
    Network na, nb;
    na.initialize(a);
    nb.initialize(b);
    EXPECT_TRUE(na == nb);
    const double conv_limit = std::sqrt(6.0 / (3.0 + 96.0));
    for (double w : na.conv().weights) EXPECT_LE(std::abs(w), conv_limit);
    const double hidden_limit = std::sqrt(6.0 / (64.0 + 16.0));
    for (double w : na.hidden().weights) EXPECT_LE(std::abs(w), hidden_limit);
    for (double bias : na.hidden().biases) EXPECT_EQ(bias, 0.0);
}

TEST(Loss, AnalyticValues) {
    EXPECT_NEAR(bce_loss(1, 0.5), std::log(2.0), 1e-12);
    EXPECT_NEAR(bce_loss(0, 0.5), 0.693147, 1e-6);
    EXPECT_NEAR(bce_loss(1, 0.9), 0.105361, 1e-6);
    EXPECT_NEAR(bce_loss(0, 0.1), -std::log(0.9), 1e-12);
}

TEST(Loss, ClampedAndNonNegative) {
    EXPECT_NEAR(bce_loss(1, 0.0), -std::log(1e-7), 1e-9);
    EXPECT_NEAR(bce_loss(0, 1.0), -std::log(1e-7), 1e-9);
    EXPECT_GE(bce_loss(1, 1.0), 0.0);
    EXPECT_LT(bce_loss(1, 1.0), 1e-6);
    for (double p = 0.01; p < 1.0; p += 0.01) {
        EXPECT_GT(bce_loss(0, p), 0.0);
        EXPECT_GT(bce_loss(1, p), 0.0);
    }
}

TEST(Backward, LogitGradientIsPMinusY) {
    const double p = 0.73;
    const double h = 1e-6;
    const double logit = std::log(p / (1 - p));
    auto loss_at = [](double z) { return bce_loss(1, 1.0 / (1.0 + std::exp(-z))); };
    const double numeric = (loss_at(logit + h) - loss_at(logit - h)) / (2 * h);
    EXPECT_NEAR(bce_logit_gradient(1, p), numeric, 1e-8);
    EXPECT_DOUBLE_EQ(bce_logit_gradient(0, p), p);
}

TEST(Backward, MatchesFiniteDifferences) {
    std::mt19937_64 rng(12);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Network net = oracle::random_network(seed);
        const FeatureMap x = oracle::random_sample(rng);
        const int label = static_cast<int>(seed % 2);
        const GradientSet analytic = network_backward(net, net.trace(x), label);
        const GradientSet numeric = oracle::finite_difference_gradient(net, x, label);
        for (std::size_t t = 0; t < kParameterTensorCount; ++t) {
            for (std::size_t i = 0; i < analytic.tensors[t].size(); ++i) {
                EXPECT_LE(oracle::relative_error(analytic.tensors[t][i], numeric.tensors[t][i], 1e-6), 1e-5)
                    << "tensor " << t << " entry " << i;
            }
        }
    }
}

TEST(Backward, WithoutForwardIsUsageError) {
    Network net;
    EXPECT_THROW(network_backward(net, ForwardTrace{}, 1), UsageError);
}

TEST(Backward, SaturatedPredictionHasNearZeroGradient) {
    Network net;
    net.output().biases[0] = 40.0;  // p rounds to the top of the clamp
    const FeatureMap x(1, 6, std::vector<double>{0.2, 0.4, 0.6, 0.8, 1.0, 0.5});
    const GradientSet g = network_backward(net, net.trace(x), 1);
    for (const auto& tensor : g.tensors) {
        for (double v : tensor) EXPECT_LE(std::abs(v), 1e-7);
    }
}

TEST(GradientSet, Arithmetic) {
    Network net;
    GradientSet a = net.zero_gradients();
    EXPECT_EQ(a.parameter_count(), 96u + 32u + 1024u + 16u + 16u + 1u);
    a.fill(2.0);
    GradientSet b = a;
    a.accumulate(b);
    a.scale(0.25);
    for (const auto& tensor : a.tensors) {
        for (double v : tensor) EXPECT_EQ(v, 1.0);
    }
    GradientSet wrong;
    EXPECT_FALSE(a.congruent_with(wrong));
    EXPECT_THROW(a.accumulate(wrong), ConfigError);
}
