#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace shm::sim {

struct ExcitationConfig {
    double band_low_hz = 20.0;
    double band_high_hz = 150.0;
    double target_rms_n = 52.0;
    double duration_s = 25.6;
    double internal_rate_hz = 2560.0;
    double output_rate_hz = 320.0;
    std::size_t output_length = 8192;
    std::uint64_t seed = 0;

    std::size_t decimation() const;
    std::size_t internal_length() const { return output_length * decimation(); }
    /// Throws ConfigError when rates, lengths or band are inconsistent.
    void validate() const;
};

/// Seeded Gaussian noise, masked to the band in the frequency domain and
/// rescaled to the target RMS. Sampled at the internal rate.
std::vector<double> generate_excitation(const ExcitationConfig& config);

/// One-sided power spectrum |X_k|^2 for k = 0..n/2 (not normalised).
std::vector<double> power_spectrum(const std::vector<double>& signal);

}  // namespace shm::sim
