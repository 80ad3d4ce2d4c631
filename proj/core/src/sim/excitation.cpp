#include "shm/sim/excitation.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <string>

#include <fftw3.h>

#include "shm/errors.hpp"

namespace shm::sim {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffers {
    explicit FftwBuffers(std::size_t n)
        : size(n),
          real(fftw_alloc_real(n)),
          spectrum(fftw_alloc_complex(n / 2 + 1)) {
        if (real == nullptr || spectrum == nullptr) {
            throw ConfigError("FFT buffer allocation failed");
        }
    }
    ~FftwBuffers() {
        fftw_free(real);
        fftw_free(spectrum);
    }
    FftwBuffers(const FftwBuffers&) = delete;
    FftwBuffers& operator=(const FftwBuffers&) = delete;

    std::size_t size;
    double* real;
    fftw_complex* spectrum;
};

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {
        if (plan_ == nullptr) {
            throw ConfigError("FFT planning failed");
        }
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

Plan forward_plan(FftwBuffers& b) {
    std::lock_guard lock(planner_mutex());
    return Plan(fftw_plan_dft_r2c_1d(static_cast<int>(b.size), b.real, b.spectrum, FFTW_ESTIMATE));
}

Plan inverse_plan(FftwBuffers& b) {
    std::lock_guard lock(planner_mutex());
    return Plan(fftw_plan_dft_c2r_1d(static_cast<int>(b.size), b.spectrum, b.real, FFTW_ESTIMATE));
}

}  // namespace

std::size_t ExcitationConfig::decimation() const {
    const double ratio = internal_rate_hz / output_rate_hz;
    const auto rounded = static_cast<std::size_t>(std::llround(ratio));
    if (rounded == 0 || std::abs(ratio - static_cast<double>(rounded)) > 1e-9) {
        throw ConfigError("internal rate must be an integer multiple of the output rate");
    }
    return rounded;
}

void ExcitationConfig::validate() const {
    if (!(band_low_hz >= 0.0) || !(band_high_hz > band_low_hz)) {
        throw ConfigError("excitation band must satisfy 0 <= low < high");
    }
    if (band_high_hz > internal_rate_hz / 2.0) {
        throw ConfigError("excitation band exceeds the Nyquist frequency of the internal rate");
    }
    if (!(target_rms_n > 0.0)) {
        throw ConfigError("excitation RMS must be positive");
    }
    if (output_length == 0) {
        throw ConfigError("output length must be positive");
    }
    decimation();
    const double implied = static_cast<double>(output_length) / output_rate_hz;
    if (std::abs(implied - duration_s) > 1e-9 * duration_s) {
        throw ConfigError("output length / output rate = " + std::to_string(implied) +
                          " s does not match the duration " + std::to_string(duration_s) + " s");
    }
}

std::vector<double> generate_excitation(const ExcitationConfig& config) {
    config.validate();
    const std::size_t n = config.internal_length();
    FftwBuffers buffers(n);
    auto forward = forward_plan(buffers);
    auto inverse = inverse_plan(buffers);

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        buffers.real[i] = normal(rng);
    }
    forward.execute();
    const double bin_hz = config.internal_rate_hz / static_cast<double>(n);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        if (f < config.band_low_hz || f > config.band_high_hz) {
            buffers.spectrum[k][0] = 0.0;
            buffers.spectrum[k][1] = 0.0;
        }
    }
    inverse.execute();

    std::vector<double> signal(buffers.real, buffers.real + n);
    double sum_sq = 0.0;
    for (double v : signal) {
        sum_sq += v * v;
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(n));
    const double gain = config.target_rms_n / rms;
    for (double& v : signal) {
        v *= gain;
    }
    return signal;
}

std::vector<double> power_spectrum(const std::vector<double>& signal) {
    if (signal.empty()) {
        return {};
    }
    FftwBuffers buffers(signal.size());
    auto forward = forward_plan(buffers);
    std::copy(signal.begin(), signal.end(), buffers.real);
    forward.execute();
    std::vector<double> power(signal.size() / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) {
        power[k] = buffers.spectrum[k][0] * buffers.spectrum[k][0] + buffers.spectrum[k][1] * buffers.spectrum[k][1];
    }
    return power;
}

}  // namespace shm::sim
