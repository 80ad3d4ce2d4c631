#include "shm/sim/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "shm/errors.hpp"
#include "shm/text_format.hpp"

namespace shm::sim {

namespace {

void require_spd(const Eigen::MatrixXd& m, const char* name) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ConfigError(std::string(name) + " matrix must be square and non-empty");
    }
    if (!m.isApprox(m.transpose(), 1e-12)) {
        throw ConfigError(std::string(name) + " matrix is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw ConfigError(std::string(name) + " matrix is not positive definite");
    }
}

constexpr double kDesignIntentHz = 5.0;

}  // namespace

ModalResult modal_analysis(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass) {
    require_spd(stiffness, "stiffness");
    require_spd(mass, "mass");
    if (stiffness.rows() != mass.rows()) {
        throw ConfigError("stiffness and mass matrices differ in size");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness, mass);
    if (solver.info() != Eigen::Success) {
        throw ConfigError("generalized eigenproblem did not converge");
    }
    ModalResult result;
    result.frequencies_hz = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt() / (2.0 * std::numbers::pi);
    result.mode_shapes = solver.eigenvectors();
    return result;
}

ModalResult modal_analysis(const StructureParams& params) {
    params.validate();
    return modal_analysis(params.stiffness_matrix(), params.mass_matrix());
}

std::vector<StateModes> modal_report(const StructureParams& baseline, const CalibrationRecord& calibration) {
    std::vector<StateModes> report;
    const auto reference = modal_analysis(baseline).frequencies_hz;
    for (const auto& state : state_catalogue()) {
        const auto freqs = modal_analysis(build_params(state, baseline, calibration)).frequencies_hz;
        StateModes row;
        row.state = state.id;
        for (std::size_t i = 0; i < kDof; ++i) {
            row.frequencies_hz[i] = freqs(static_cast<Eigen::Index>(i));
            row.shift_hz[i] = row.frequencies_hz[i] - reference(static_cast<Eigen::Index>(i));
        }
        report.push_back(row);
    }
    return report;
}

void write_modal_report(std::ostream& out, const std::vector<StateModes>& report) {
    out << "state,f1_hz,f2_hz,f3_hz,f4_hz,df1_hz,df2_hz,df3_hz,df4_hz,max_flexible_shift_hz,within_5hz\n";
    for (const auto& row : report) {
        out << row.state;
        for (double f : row.frequencies_hz) {
            out << ',' << format_double(f);
        }
        for (double d : row.shift_hz) {
            out << ',' << format_double(d);
        }
        // Mode 1 is the grounded rigid-body mode; only flexible modes count.
        double max_shift = 0.0;
        for (std::size_t i = 1; i < kDof; ++i) {
            max_shift = std::max(max_shift, std::abs(row.shift_hz[i]));
        }
        out << ',' << format_double(max_shift) << ',' << (max_shift <= kDesignIntentHz ? 1 : 0) << '\n';
    }
}

}  // namespace shm::sim
