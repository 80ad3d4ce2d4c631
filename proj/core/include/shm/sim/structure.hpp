#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace shm::sim {

/// Degrees of freedom: base plate, floor 1, floor 2, floor 3.
inline constexpr std::size_t kDof = 4;
inline constexpr std::size_t kStories = 3;

/// Physical constants of the surrogate. Everything not measured on the
/// benchmark rig lives here so a retune shows up in every output header.
struct CalibrationRecord {
    double aluminum_density_kg_m3 = 2700.0;
    double youngs_modulus_pa = 69e9;
    double column_length_m = 0.177;
    double column_width_m = 0.025;
    double column_thickness_m = 0.006;  // along the shaking axis
    int columns_per_story = 4;
    double plate_side_m = 0.305;
    double plate_thickness_m = 0.025;
    double added_mass_kg = 1.2;
    double column_stiffness_reduction = 0.875;
    double damping_ratio = 0.02;
    double grounding_mode_hz = 5.0;
    double bumper_penalty_factor = 100.0;
    double shaker_constant_n_per_v = 20.0;
    double excitation_v_rms = 2.6;
    double gravity_m_s2 = 9.80665;

    double plate_mass_kg() const;
    /// Fixed-fixed column in weak-axis bending: 12 E I / L^3.
    double column_stiffness_n_m() const;
    double target_force_rms_n() const { return shaker_constant_n_per_v * excitation_v_rms; }

    /// `key=value` lines describing every constant.
    std::vector<std::string> describe() const;
};

struct StructureParams {
    std::array<double, kDof> masses_kg{};
    std::array<double, kStories> story_stiffness_n_m{};
    /// Soft spring from the base plate to ground that keeps the rigid-body mode below the band.
    double grounding_stiffness_n_m = 0.0;
    /// Rayleigh damping C = a0 M + a1 K, computed once for the baseline.
    double rayleigh_a0 = 0.0;
    double rayleigh_a1 = 0.0;
    /// Bumper gap on (x_floor3 - x_floor2); empty means the bumper can never engage.
    std::optional<double> gap_m;
    double bumper_stiffness_n_m = 0.0;
    /// Documented multiplier applied to all story stiffnesses during calibration.
    double stiffness_scale = 1.0;

    /// Throws ConfigError on non-positive masses or stiffnesses or a negative gap.
    void validate() const;

    Eigen::Matrix4d mass_matrix() const;
    Eigen::Matrix4d stiffness_matrix() const;
    Eigen::Matrix4d damping_matrix() const;
};

enum class MassLocation { None, Base, Floor1 };

struct StateCondition {
    int id = 0;
    bool damaged = false;
    std::string_view description;
    MassLocation added_mass = MassLocation::None;
    /// Number of columns reduced per story (story 1 = between base and floor 1).
    std::array<int, kStories> reduced_columns{};
    std::optional<double> gap_mm;

    int label() const { return damaged ? 1 : 0; }
};

/// The seventeen structural state conditions of the benchmark.
const std::array<StateCondition, 17>& state_catalogue();
/// Throws UsageError for ids outside 1..17.
const StateCondition& state_condition(int id);

/// Baseline (state 1) parameters derived from geometry and material constants.
StructureParams calibrate_baseline(const CalibrationRecord& calibration = {});

/// Applies a state's mass, stiffness and gap modifications to calibrated baseline parameters.
StructureParams build_params(const StateCondition& state, const StructureParams& base,
                             const CalibrationRecord& calibration = {});

/// Story stiffness multiplier for `reduced` of `columns` parallel columns each cut by `reduction`.
double story_reduction_factor(int reduced, int columns, double reduction);

}  // namespace shm::sim
