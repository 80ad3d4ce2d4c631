#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shm/sim/structure.hpp"

namespace shm::sim {

inline constexpr std::size_t kChannelCount = 5;

struct SimulationOptions {
    double internal_rate_hz = 2560.0;
    std::size_t decimation = 8;
    /// RK4 steps per excitation sample; force is linearly interpolated in between.
    std::size_t substeps = 1;
    double anti_alias_cutoff_hz = 140.0;
    std::size_t filter_taps = 511;
    /// Any displacement beyond this magnitude (or a non-finite state) aborts the run.
    double divergence_bound_m = 1.0;
    double gravity_m_s2 = 9.80665;
};

/// Contact force of the bumper on the top floor, pushing it back by
/// k_b * max(0, drift - gap); the floor below receives the opposite force.
double bumper_force(double drift_m, const StructureParams& params);

/// Response sampled at every excitation instant.
struct RawResponse {
    std::vector<std::array<double, kDof>> displacement_m;
    std::vector<std::array<double, kDof>> acceleration_m_s2;
};

/// Fixed-step RK4 integration of M a + C v + K x + f_b(x) = F e_base from rest.
/// Throws SimulationError with the time of divergence.
RawResponse integrate(const StructureParams& params, std::span<const double> force,
                      const SimulationOptions& options = {});

struct TrialRecord {
    int state = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double sample_rate_hz = 320.0;
    /// ch1 force (N), ch2..ch5 acceleration (g) of base, floor 1, floor 2, floor 3.
    std::array<std::vector<double>, kChannelCount> channels;

    std::size_t length() const { return channels[0].size(); }
};

/// Integrates, low-pass filters all five channels with a zero-phase FIR and
/// decimates to the output rate. Accelerations are reported in g.
TrialRecord simulate_trial(const StructureParams& params, std::span<const double> force,
                           const SimulationOptions& options = {});

/// Windowed-sinc (Blackman) low-pass with unit DC gain; `taps` must be odd.
std::vector<double> design_lowpass(double cutoff_hz, double rate_hz, std::size_t taps);

/// Symmetric (zero-phase) FIR evaluated every `factor` samples, with the
/// signal mirrored at both ends.
std::vector<double> filter_decimate(std::span<const double> signal, std::span<const double> taps,
                                    std::size_t factor);

}  // namespace shm::sim
