#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shm::nn {

/// A channels-by-length grid of activations, stored channel-major:
/// value(c, i) lives at index c * length + i.
class FeatureMap {
public:
    FeatureMap() = default;
    FeatureMap(std::size_t channels, std::size_t length, double fill = 0.0);
    FeatureMap(std::size_t channels, std::size_t length, std::vector<double> values);

    std::size_t channels() const noexcept { return channels_; }
    std::size_t length() const noexcept { return length_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& at(std::size_t channel, std::size_t index) { return values_[channel * length_ + index]; }
    double at(std::size_t channel, std::size_t index) const { return values_[channel * length_ + index]; }

    std::span<double> channel(std::size_t c) { return {values_.data() + c * length_, length_}; }
    std::span<const double> channel(std::size_t c) const { return {values_.data() + c * length_, length_}; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool all_finite() const;

    friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

private:
    std::size_t channels_ = 0;
    std::size_t length_ = 0;
    std::vector<double> values_;
};

/// Channel-major flattening: channel 0 positions first, then channel 1, ...
std::vector<double> flatten(const FeatureMap& input);

/// Inverse of flatten for a known shape.
FeatureMap unflatten(std::span<const double> flat, std::size_t channels, std::size_t length);

}  // namespace shm::nn
