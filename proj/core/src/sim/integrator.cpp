#include "shm/sim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shm/errors.hpp"

namespace shm::sim {

namespace {

using State = std::array<double, kDof>;

struct Dynamics {
    explicit Dynamics(const StructureParams& p)
        : params(p), stiffness(p.stiffness_matrix()), damping(p.damping_matrix()) {}

    State acceleration(const State& x, const State& v, double base_force) const {
        State a{};
        for (std::size_t i = 0; i < kDof; ++i) {
            double internal = 0.0;
            for (std::size_t j = 0; j < kDof; ++j) {
                internal += damping(i, j) * v[j] + stiffness(i, j) * x[j];
            }
            a[i] = -internal;
        }
        a[0] += base_force;
        const double contact = bumper_force(x[3] - x[2], params);
        a[3] -= contact;
        a[2] += contact;
        for (std::size_t i = 0; i < kDof; ++i) {
            a[i] /= params.masses_kg[i];
        }
        return a;
    }

    const StructureParams& params;
    Eigen::Matrix4d stiffness;
    Eigen::Matrix4d damping;
};

State axpy(const State& y, double a, const State& x) {
    State out{};
    for (std::size_t i = 0; i < kDof; ++i) {
        out[i] = y[i] + a * x[i];
    }
    return out;
}

bool diverged(const State& x, const State& v, double bound) {
    for (std::size_t i = 0; i < kDof; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(v[i]) || std::abs(x[i]) > bound) {
            return true;
        }
    }
    return false;
}

}  // namespace

double bumper_force(double drift_m, const StructureParams& params) {
    if (!params.gap_m) {
        return 0.0;
    }
    const double penetration = drift_m - *params.gap_m;
    return penetration > 0.0 ? params.bumper_stiffness_n_m * penetration : 0.0;
}

RawResponse integrate(const StructureParams& params, std::span<const double> force,
                      const SimulationOptions& options) {
    params.validate();
    if (options.substeps == 0) {
        throw ConfigError("substeps must be positive");
    }
    const Dynamics dyn(params);
    const std::size_t n = force.size();
    const double sample_dt = 1.0 / options.internal_rate_hz;
    const double dt = sample_dt / static_cast<double>(options.substeps);
    auto force_at = [&](std::size_t sample, double frac) {
        const double f0 = force[sample];
        const double f1 = sample + 1 < n ? force[sample + 1] : f0;
        return f0 + frac * (f1 - f0);
    };

    RawResponse out;
    out.displacement_m.resize(n);
    out.acceleration_m_s2.resize(n);
    State x{};
    State v{};
    for (std::size_t s = 0; s < n; ++s) {
        out.displacement_m[s] = x;
        out.acceleration_m_s2[s] = dyn.acceleration(x, v, force[s]);
        for (std::size_t sub = 0; sub < options.substeps; ++sub) {
            const double frac0 = static_cast<double>(sub) / static_cast<double>(options.substeps);
            const double frac_mid = (static_cast<double>(sub) + 0.5) / static_cast<double>(options.substeps);
            const double frac1 = (static_cast<double>(sub) + 1.0) / static_cast<double>(options.substeps);
            const double f0 = force_at(s, frac0);
            const double fm = force_at(s, frac_mid);
            const double f1 = force_at(s, frac1);

            const State k1x = v;
            const State k1v = dyn.acceleration(x, v, f0);
            const State k2x = axpy(v, 0.5 * dt, k1v);
            const State k2v = dyn.acceleration(axpy(x, 0.5 * dt, k1x), k2x, fm);
            const State k3x = axpy(v, 0.5 * dt, k2v);
            const State k3v = dyn.acceleration(axpy(x, 0.5 * dt, k2x), k3x, fm);
            const State k4x = axpy(v, dt, k3v);
            const State k4v = dyn.acceleration(axpy(x, dt, k3x), k4x, f1);
            for (std::size_t i = 0; i < kDof; ++i) {
                x[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
                v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
            }
        }
        if (diverged(x, v, options.divergence_bound_m)) {
            const double t = static_cast<double>(s + 1) * sample_dt;
            throw SimulationError("integration diverged at t = " + std::to_string(t) + " s", t);
        }
    }
    return out;
}

std::vector<double> design_lowpass(double cutoff_hz, double rate_hz, std::size_t taps) {
    if (taps % 2 == 0 || taps < 3) {
        throw ConfigError("low-pass filter needs an odd number of taps >= 3");
    }
    if (!(cutoff_hz > 0.0) || cutoff_hz >= rate_hz / 2.0) {
        throw ConfigError("low-pass cutoff must lie inside (0, Nyquist)");
    }
    const double fc = cutoff_hz / rate_hz;
    const auto half = static_cast<double>(taps - 1) / 2.0;
    std::vector<double> h(taps);
    double sum = 0.0;
    for (std::size_t i = 0; i < taps; ++i) {
        const double m = static_cast<double>(i) - half;
        const double sinc = m == 0.0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(taps - 1);
        const double window = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2.0 * phase);
        h[i] = sinc * window;
        sum += h[i];
    }
    for (double& v : h) {
        v /= sum;
    }
    return h;
}

std::vector<double> filter_decimate(std::span<const double> signal, std::span<const double> taps,
                                    std::size_t factor) {
    if (factor == 0) {
        throw ConfigError("decimation factor must be positive");
    }
    const auto n = static_cast<std::ptrdiff_t>(signal.size());
    if (n == 0) {
        return {};
    }
    const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
    auto sample = [&](std::ptrdiff_t i) {
        // Mirror without repeating the edge sample.
        while (i < 0 || i >= n) {
            if (i < 0) i = -i;
            if (i >= n) i = 2 * (n - 1) - i;
            if (n == 1) return signal[0];
        }
        return signal[static_cast<std::size_t>(i)];
    };
    std::vector<double> out;
    out.reserve(signal.size() / factor + 1);
    for (std::ptrdiff_t c = 0; c < n; c += static_cast<std::ptrdiff_t>(factor)) {
        double acc = 0.0;
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(taps.size()); ++k) {
            acc += taps[static_cast<std::size_t>(k)] * sample(c + k - half);
        }
        out.push_back(acc);
    }
    return out;
}

TrialRecord simulate_trial(const StructureParams& params, std::span<const double> force,
                           const SimulationOptions& options) {
    const auto raw = integrate(params, force, options);
    const auto taps = design_lowpass(options.anti_alias_cutoff_hz, options.internal_rate_hz, options.filter_taps);

    TrialRecord record;
    record.sample_rate_hz = options.internal_rate_hz / static_cast<double>(options.decimation);
    record.channels[0] = filter_decimate(force, taps, options.decimation);
    std::vector<double> accel(force.size());
    for (std::size_t dof = 0; dof < kDof; ++dof) {
        for (std::size_t s = 0; s < force.size(); ++s) {
            accel[s] = raw.acceleration_m_s2[s][dof] / options.gravity_m_s2;
        }
        record.channels[dof + 1] = filter_decimate(accel, taps, options.decimation);
    }
    return record;
}

}  // namespace shm::sim
