#pragma once

namespace shm::nn {

inline constexpr double kDefaultBceClip = 1e-7;

/// Binary cross-entropy with the probability clamped to [clip, 1 - clip].
double bce_loss(int label, double probability, double clip = kDefaultBceClip);

/// d(loss)/d(logit) for a sigmoid output trained on binary cross-entropy.
inline double bce_logit_gradient(int label, double probability) {
    return probability - static_cast<double>(label);
}

}  // namespace shm::nn
