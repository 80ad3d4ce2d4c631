#include "shm/nn/loss.hpp"

#include <algorithm>
#include <cmath>

namespace shm::nn {

double bce_loss(int label, double probability, double clip) {
    const double p = std::clamp(probability, clip, 1.0 - clip);
    const double y = static_cast<double>(label);
    return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

}  // namespace shm::nn
