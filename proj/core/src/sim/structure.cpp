#include "shm/sim/structure.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shm/errors.hpp"
#include "shm/sim/modal.hpp"
#include "shm/text_format.hpp"

namespace shm::sim {

namespace {

// Transcribed from the benchmark's state table.
const std::array<StateCondition, 17> kCatalogue = {{
    {1, false, "Reference state with baseline condition", MassLocation::None, {0, 0, 0}, std::nullopt},
    {2, false, "Added 1.2 kg mass at the base", MassLocation::Base, {0, 0, 0}, std::nullopt},
    {3, false, "Added 1.2 kg mass on the 1st floor", MassLocation::Floor1, {0, 0, 0}, std::nullopt},
    {4, false, "Reduction of stiffness by 87.5% in column 1BD", MassLocation::None, {1, 0, 0}, std::nullopt},
    {5, false, "Reduction of stiffness by 87.5% in column 1AD and 1BD", MassLocation::None, {2, 0, 0},
     std::nullopt},
    {6, false, "Reduction of stiffness by 87.5% in column 2BD", MassLocation::None, {0, 1, 0}, std::nullopt},
    {7, false, "Reduction of stiffness by 87.5% in column 2AD and 2BD", MassLocation::None, {0, 2, 0},
     std::nullopt},
    {8, false, "Reduction of stiffness by 87.5% in column 3BD", MassLocation::None, {0, 0, 1}, std::nullopt},
    {9, false, "Reduction of stiffness by 87.5% in column 3AD and 3BD", MassLocation::None, {0, 0, 2},
     std::nullopt},
    {10, true, "0.20mm Gap introduced", MassLocation::None, {0, 0, 0}, 0.20},
    {11, true, "0.15mm Gap introduced", MassLocation::None, {0, 0, 0}, 0.15},
    {12, true, "0.13mm Gap introduced", MassLocation::None, {0, 0, 0}, 0.13},
    {13, true, "0.10mm Gap introduced", MassLocation::None, {0, 0, 0}, 0.10},
    {14, true, "0.05mm Gap introduced", MassLocation::None, {0, 0, 0}, 0.05},
    {15, true, "0.20mm Gap introduced and added 1.2 kg mass at base", MassLocation::Base, {0, 0, 0}, 0.20},
    {16, true, "0.20mm Gap introduced and added 1.2 kg mass on 1st floor", MassLocation::Floor1, {0, 0, 0},
     0.20},
    {17, true, "0.10mm Gap introduced and added 1.2 kg mass on 1st floor", MassLocation::Floor1, {0, 0, 0},
     0.10},
}};

constexpr double kFlexibleBandLowHz = 20.0;
constexpr double kFlexibleBandHighHz = 160.0;

void set_rayleigh(StructureParams& params, double zeta) {
    const auto modes = modal_analysis(params.stiffness_matrix(), params.mass_matrix());
    const double w1 = 2.0 * std::numbers::pi * modes.frequencies_hz(0);
    const double w4 = 2.0 * std::numbers::pi * modes.frequencies_hz(kDof - 1);
    params.rayleigh_a0 = 2.0 * zeta * w1 * w4 / (w1 + w4);
    params.rayleigh_a1 = 2.0 * zeta / (w1 + w4);
}

}  // namespace

double CalibrationRecord::plate_mass_kg() const {
    return plate_side_m * plate_side_m * plate_thickness_m * aluminum_density_kg_m3;
}

double CalibrationRecord::column_stiffness_n_m() const {
    const double inertia = column_width_m * std::pow(column_thickness_m, 3) / 12.0;
    return 12.0 * youngs_modulus_pa * inertia / std::pow(column_length_m, 3);
}

std::vector<std::string> CalibrationRecord::describe() const {
    auto kv = [](const char* key, double v) { return std::string(key) + "=" + format_double(v); };
    return {
        kv("aluminum_density_kg_m3", aluminum_density_kg_m3),
        kv("youngs_modulus_pa", youngs_modulus_pa),
        kv("column_length_m", column_length_m),
        kv("column_width_m", column_width_m),
        kv("column_thickness_m", column_thickness_m),
        "columns_per_story=" + std::to_string(columns_per_story),
        kv("plate_side_m", plate_side_m),
        kv("plate_thickness_m", plate_thickness_m),
        kv("added_mass_kg", added_mass_kg),
        kv("column_stiffness_reduction", column_stiffness_reduction),
        kv("damping_ratio", damping_ratio),
        kv("grounding_mode_hz", grounding_mode_hz),
        kv("bumper_penalty_factor", bumper_penalty_factor),
        kv("shaker_constant_n_per_v", shaker_constant_n_per_v),
        kv("excitation_v_rms", excitation_v_rms),
        kv("gravity_m_s2", gravity_m_s2),
    };
}

void StructureParams::validate() const {
    for (std::size_t i = 0; i < kDof; ++i) {
        if (!(masses_kg[i] > 0.0)) {
            throw ConfigError("mass of DOF " + std::to_string(i + 1) + " must be positive");
        }
    }
    for (std::size_t i = 0; i < kStories; ++i) {
        if (!(story_stiffness_n_m[i] > 0.0)) {
            throw ConfigError("stiffness of story " + std::to_string(i + 1) + " must be positive");
        }
    }
    if (!(grounding_stiffness_n_m > 0.0)) {
        throw ConfigError("grounding stiffness must be positive");
    }
    if (gap_m && (*gap_m < 0.0 || !(bumper_stiffness_n_m > 0.0))) {
        throw ConfigError("bumper needs a non-negative gap and positive penalty stiffness");
    }
}

Eigen::Matrix4d StructureParams::mass_matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (std::size_t i = 0; i < kDof; ++i) {
        m(i, i) = masses_kg[i];
    }
    return m;
}

Eigen::Matrix4d StructureParams::stiffness_matrix() const {
    Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
    k(0, 0) = grounding_stiffness_n_m;
    for (std::size_t s = 0; s < kStories; ++s) {
        const double ks = story_stiffness_n_m[s];
        k(s, s) += ks;
        k(s + 1, s + 1) += ks;
        k(s, s + 1) -= ks;
        k(s + 1, s) -= ks;
    }
    return k;
}

Eigen::Matrix4d StructureParams::damping_matrix() const {
    return rayleigh_a0 * mass_matrix() + rayleigh_a1 * stiffness_matrix();
}

const std::array<StateCondition, 17>& state_catalogue() {
    return kCatalogue;
}

const StateCondition& state_condition(int id) {
    if (id < 1 || id > static_cast<int>(kCatalogue.size())) {
        throw UsageError("unknown state id " + std::to_string(id) + " (expected 1..17)");
    }
    return kCatalogue[static_cast<std::size_t>(id - 1)];
}

double story_reduction_factor(int reduced, int columns, double reduction) {
    return (static_cast<double>(columns) - reduction * static_cast<double>(reduced)) /
           static_cast<double>(columns);
}

StructureParams calibrate_baseline(const CalibrationRecord& cal) {
    StructureParams p;
    p.masses_kg.fill(cal.plate_mass_kg());
    p.story_stiffness_n_m.fill(cal.columns_per_story * cal.column_stiffness_n_m());
    double total_mass = 0.0;
    for (double m : p.masses_kg) {
        total_mass += m;
    }
    const double w_ground = 2.0 * std::numbers::pi * cal.grounding_mode_hz;
    p.grounding_stiffness_n_m = total_mass * w_ground * w_ground;

    // Bring the three flexible modes into the excitation neighbourhood with a
    // single stiffness factor if the geometry alone misses it.
    auto freqs = modal_analysis(p.stiffness_matrix(), p.mass_matrix()).frequencies_hz;
    double scale = 1.0;
    if (freqs(1) < kFlexibleBandLowHz) {
        scale = std::pow(1.05 * kFlexibleBandLowHz / freqs(1), 2);
    } else if (freqs(kDof - 1) > kFlexibleBandHighHz) {
        scale = std::pow(0.95 * kFlexibleBandHighHz / freqs(kDof - 1), 2);
    }
    if (scale != 1.0) {
        for (double& k : p.story_stiffness_n_m) {
            k *= scale;
        }
        p.stiffness_scale = scale;
    }

    set_rayleigh(p, cal.damping_ratio);
    p.bumper_stiffness_n_m = cal.bumper_penalty_factor * p.story_stiffness_n_m[0];
    p.gap_m.reset();
    p.validate();
    return p;
}

StructureParams build_params(const StateCondition& state, const StructureParams& base,
                             const CalibrationRecord& cal) {
    state_condition(state.id);
    StructureParams p = base;
    switch (state.added_mass) {
        case MassLocation::None:
            break;
        case MassLocation::Base:
            p.masses_kg[0] += cal.added_mass_kg;
            break;
        case MassLocation::Floor1:
            p.masses_kg[1] += cal.added_mass_kg;
            break;
    }
    for (std::size_t s = 0; s < kStories; ++s) {
        if (state.reduced_columns[s] > 0) {
            p.story_stiffness_n_m[s] *= story_reduction_factor(state.reduced_columns[s], cal.columns_per_story,
                                                               cal.column_stiffness_reduction);
        }
    }
    if (state.gap_mm) {
        p.gap_m = *state.gap_mm * 1e-3;
    } else {
        p.gap_m.reset();
    }
    p.validate();
    return p;
}

}  // namespace shm::sim
