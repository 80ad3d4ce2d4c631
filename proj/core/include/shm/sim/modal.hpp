#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "shm/sim/structure.hpp"

namespace shm::sim {

struct ModalResult {
    /// Ascending natural frequencies in Hz.
    Eigen::VectorXd frequencies_hz;
    /// Mass-normalised mode shapes, one per column.
    Eigen::MatrixXd mode_shapes;
};

/// Undamped generalized eigenproblem K phi = w^2 M phi. Throws ConfigError
/// unless both matrices are symmetric positive definite.
ModalResult modal_analysis(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass);

/// Linear modes of the structure; the bumper is ignored.
ModalResult modal_analysis(const StructureParams& params);

struct StateModes {
    int state = 0;
    std::array<double, kDof> frequencies_hz{};
    std::array<double, kDof> shift_hz{};  // relative to state 1
};

/// Linear modes of every catalogue state with shifts against state 1.
std::vector<StateModes> modal_report(const StructureParams& baseline, const CalibrationRecord& calibration = {});

/// CSV `state,f1_hz..f4_hz,df1_hz..df4_hz,max_flexible_shift_hz,within_5hz`.
void write_modal_report(std::ostream& out, const std::vector<StateModes>& report);

}  // namespace shm::sim
