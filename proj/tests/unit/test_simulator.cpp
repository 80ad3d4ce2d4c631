#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sim_checks.hpp"
#include "shm/errors.hpp"
#include "shm/sim/dataset.hpp"
#include "shm/sim/excitation.hpp"
#include "shm/sim/integrator.hpp"
#include "shm/sim/modal.hpp"
#include "shm/sim/structure.hpp"

using namespace shm;
using namespace shm::sim;

namespace {

const StructureParams& baseline() {
    static const StructureParams p = calibrate_baseline();
    return p;
}

double hz_to_omega2(double f) {
    const double w = 2.0 * std::numbers::pi * f;
    return w * w;
}

}  // namespace

TEST(Catalogue, MatchesStateTable) {
    const auto& cat = state_catalogue();
    ASSERT_EQ(cat.size(), 17u);
    EXPECT_EQ(cat[3].description, "Reduction of stiffness by 87.5% in column 1BD");
    EXPECT_EQ(cat[9].description, "0.20mm Gap introduced");
    EXPECT_EQ(cat[14].description, "0.20mm Gap introduced and added 1.2 kg mass at base");
    EXPECT_EQ(cat[16].description, "0.10mm Gap introduced and added 1.2 kg mass on 1st floor");
    for (const auto& s : cat) {
        EXPECT_EQ(s.damaged, s.id >= 10) << s.id;
        EXPECT_EQ(s.gap_mm.has_value(), s.id >= 10) << s.id;
    }
    EXPECT_THROW(state_condition(0), UsageError);
    EXPECT_THROW(state_condition(18), UsageError);
}

TEST(Calibration, PlateMassAgainstAddedMassRatio) {
    const CalibrationRecord cal;
    EXPECT_NEAR(cal.plate_mass_kg(), 0.305 * 0.305 * 0.025 * 2700.0, 1e-12);
    const double cross_check = 1.2 / 0.19;
    EXPECT_LT(std::abs(cal.plate_mass_kg() - cross_check) / cross_check, 0.10);
}

TEST(Calibration, StoryStiffnessFromColumnGeometry) {
    const CalibrationRecord cal;
    const double inertia = 0.025 * std::pow(0.006, 3) / 12.0;
    const double column = 12.0 * 69e9 * inertia / std::pow(0.177, 3);
    EXPECT_NEAR(cal.column_stiffness_n_m(), column, 1e-6 * column);
    for (double k : baseline().story_stiffness_n_m) EXPECT_NEAR(k, 4.0 * column * baseline().stiffness_scale, 1e-6);
    EXPECT_NEAR(cal.target_force_rms_n(), 52.0, 1e-12);
}

TEST(Calibration, FlexibleModesInBandAndRigidModeBelow) {
    const auto f = modal_analysis(baseline()).frequencies_hz;
    EXPECT_LT(f(0), 20.0);
    for (int i = 1; i < 4; ++i) {
        EXPECT_GE(f(i), 20.0);
        EXPECT_LE(f(i), 160.0);
    }
}

TEST(Calibration, RayleighDampingTwoPercentAtAnchorModes) {
    const auto f = modal_analysis(baseline()).frequencies_hz;
    for (int i : {0, 3}) {
        const double w = 2.0 * std::numbers::pi * f(i);
        const double zeta = baseline().rayleigh_a0 / (2.0 * w) + baseline().rayleigh_a1 * w / 2.0;
        EXPECT_NEAR(zeta, 0.02, 1e-12);
    }
}

TEST(BuildParams, StateExamples) {
    const StructureParams s1 = build_params(state_condition(1), baseline());
    EXPECT_EQ(s1.masses_kg, baseline().masses_kg);
    EXPECT_EQ(s1.story_stiffness_n_m, baseline().story_stiffness_n_m);
    EXPECT_FALSE(s1.gap_m.has_value());

    const StructureParams s4 = build_params(state_condition(4), baseline());
    EXPECT_DOUBLE_EQ(s4.story_stiffness_n_m[0], baseline().story_stiffness_n_m[0] * 0.78125);
    EXPECT_EQ(s4.story_stiffness_n_m[1], baseline().story_stiffness_n_m[1]);

    const StructureParams s9 = build_params(state_condition(9), baseline());
    EXPECT_DOUBLE_EQ(s9.story_stiffness_n_m[2], baseline().story_stiffness_n_m[2] * 0.5625);

    const StructureParams s15 = build_params(state_condition(15), baseline());
    ASSERT_TRUE(s15.gap_m.has_value());
    EXPECT_DOUBLE_EQ(*s15.gap_m, 0.20e-3);
    EXPECT_DOUBLE_EQ(s15.masses_kg[0], baseline().masses_kg[0] + 1.2);
    EXPECT_EQ(s15.masses_kg[1], baseline().masses_kg[1]);

    const StructureParams s3 = build_params(state_condition(3), baseline());
    EXPECT_DOUBLE_EQ(s3.masses_kg[1], baseline().masses_kg[1] + 1.2);
}

TEST(BuildParams, ValidationRejectsBadParameters) {
    StructureParams p = baseline();
    p.masses_kg[2] = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    p = baseline();
    p.gap_m = -1e-4;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Modal, TwoDofClosedForm) {
    Eigen::MatrixXd k(2, 2), m(2, 2);
    k << 2, -1, -1, 1;
    m << 1, 0, 0, 1;
    const ModalResult r = modal_analysis(k, m);
    const double w_lo = std::sqrt((3.0 - std::sqrt(5.0)) / 2.0);
    const double w_hi = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
    EXPECT_NEAR(r.frequencies_hz(0), w_lo / (2.0 * std::numbers::pi), 1e-12);
    EXPECT_NEAR(r.frequencies_hz(1), w_hi / (2.0 * std::numbers::pi), 1e-12);
}

TEST(Modal, DoublingStiffnessScalesBySqrtTwo) {
    StructureParams p = baseline();
    const auto before = modal_analysis(p).frequencies_hz;
    for (double& k : p.story_stiffness_n_m) k *= 2.0;
    p.grounding_stiffness_n_m *= 2.0;
    const auto after = modal_analysis(p).frequencies_hz;
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(after(i), before(i) * std::sqrt(2.0), 1e-9 * after(i));
}

TEST(Modal, FrequenciesAreRootsOfCharacteristicPolynomial) {
    for (int state : {1, 2, 5, 9, 16}) {
        const StructureParams p = build_params(state_condition(state), baseline());
        const Eigen::Matrix4d m = oracle::assemble_mass(p);
        const Eigen::Matrix4d k = oracle::assemble_stiffness(p);
        const auto f = modal_analysis(p).frequencies_hz;
        for (int i = 0; i < 4; ++i) {
            // Relative to the scale of det(K), the residual of det(K - w^2 M) vanishes at an eigenvalue.
            const double lam = hz_to_omega2(f(i));
            const double residual = (k - lam * m).determinant();
            const double scale = std::abs(k.determinant()) + std::pow(lam, 4) * std::abs(m.determinant());
            EXPECT_LT(std::abs(residual) / scale, 1e-9) << "state " << state << " mode " << i;
        }
    }
}

TEST(Modal, RejectsIndefiniteMatrices) {
    Eigen::MatrixXd k(2, 2), m(2, 2);
    k << 1, 0, 0, -1;
    m << 1, 0, 0, 1;
    EXPECT_THROW(modal_analysis(k, m), ConfigError);
    k << 2, -1, -1, 1;
    m << 1, 0, 0, 0;
    EXPECT_THROW(modal_analysis(k, m), ConfigError);
}

TEST(Modal, StiffnessReductionNeverRaisesFrequencies) {
    const auto base = modal_analysis(baseline()).frequencies_hz;
    for (int state = 4; state <= 9; ++state) {
        const auto f = modal_analysis(build_params(state_condition(state), baseline())).frequencies_hz;
        for (int i = 0; i < 4; ++i) EXPECT_LE(f(i), base(i) + 1e-9) << "state " << state;
    }
}

TEST(Modal, ReportShiftsAgainstBaseline) {
    const auto report = modal_report(baseline());
    ASSERT_EQ(report.size(), 17u);
    for (double s : report[0].shift_hz) EXPECT_EQ(s, 0.0);
    for (int state = 2; state <= 9; ++state) {
        double biggest = 0.0;
        for (double s : report[static_cast<std::size_t>(state - 1)].shift_hz) biggest = std::max(biggest, std::abs(s));
        EXPECT_GT(biggest, 0.0) << "state " << state;
    }
    std::ostringstream out;
    write_modal_report(out, report);
    EXPECT_EQ(out.str().rfind("state,f1_hz,f2_hz,f3_hz,f4_hz,df1_hz,df2_hz,df3_hz,df4_hz,max_flexible_shift_hz,within_5hz\n", 0),
              0u);
}

TEST(Excitation, RmsBandAndDeterminism) {
    ExcitationConfig cfg;
    cfg.seed = 17;
    const auto x = generate_excitation(cfg);
    ASSERT_EQ(x.size(), 65536u);
    EXPECT_NEAR(oracle::rms(x), 52.0, 52.0 * 1e-3);

    const auto power = power_spectrum(x);
    const double bin = cfg.internal_rate_hz / static_cast<double>(x.size());
    double inside = 0.0, total = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
        const double f = static_cast<double>(k) * bin;
        total += power[k];
        if (f >= 20.0 && f <= 150.0) inside += power[k];
    }
    EXPECT_LE((total - inside) / total, 0.01);

    EXPECT_EQ(generate_excitation(cfg), x);
    cfg.seed = 18;
    EXPECT_NE(generate_excitation(cfg), x);
}

TEST(Excitation, InconsistentConfigRejected) {
    ExcitationConfig cfg;
    cfg.band_high_hz = 2000.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = ExcitationConfig{};
    cfg.output_length = 4096;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = ExcitationConfig{};
    cfg.internal_rate_hz = 2500.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Integrator, ZeroForceStaysAtRest) {
    const std::vector<double> zero(4096, 0.0);
    const TrialRecord rec = simulate_trial(build_params(state_condition(14), baseline()), zero);
    for (const auto& ch : rec.channels) {
        for (double v : ch) EXPECT_EQ(v, 0.0);
    }
}

TEST(Integrator, BumperForceIsOneSided) {
    StructureParams p = build_params(state_condition(14), baseline());
    const double gap = *p.gap_m;
    EXPECT_EQ(bumper_force(gap, p), 0.0);
    EXPECT_EQ(bumper_force(-1e-3, p), 0.0);
    EXPECT_GT(bumper_force(gap + 1e-6, p), 0.0);
    EXPECT_NEAR(bumper_force(gap + 1e-6, p), p.bumper_stiffness_n_m * 1e-6, 1e-9);
    EXPECT_EQ(bumper_force(1.0, baseline()), 0.0);
}

TEST(Integrator, ContactForcesCancel) {
    // Undamped, so the only external forces are the shaker and the grounding
    // spring: sum(m a) = F - k_g x_base whether or not the bumper is touching.
    StructureParams p = build_params(state_condition(14), baseline());
    p.rayleigh_a0 = 0.0;
    p.rayleigh_a1 = 0.0;
    std::vector<double> force(2560, 0.0);
    for (std::size_t i = 0; i < force.size(); ++i) {
        force[i] = 200.0 * std::sin(2.0 * M_PI * 30.0 * static_cast<double>(i) / 2560.0);
    }
    const RawResponse r = integrate(p, force);
    double engaged = 0.0;
    for (std::size_t s = 0; s < force.size(); ++s) {
        const auto& x = r.displacement_m[s];
        const auto& a = r.acceleration_m_s2[s];
        double momentum_rate = 0.0;
        for (std::size_t i = 0; i < kDof; ++i) momentum_rate += p.masses_kg[i] * a[i];
        const double external = force[s] - p.grounding_stiffness_n_m * x[0];
        EXPECT_NEAR(momentum_rate, external, 1e-9 * (std::abs(external) + 200.0));
        engaged = std::max(engaged, bumper_force(x[3] - x[2], p));
    }
    EXPECT_GT(engaged, 0.0);
}

TEST(Integrator, DivergenceReportsTime) {
    StructureParams p = baseline();
    std::vector<double> force(256, 1e12);
    try {
        integrate(p, force);
        FAIL() << "expected SimulationError";
    } catch (const SimulationError& e) {
        EXPECT_GT(e.time_s(), 0.0);
        EXPECT_LT(e.time_s(), 0.1);
    }
}

TEST(Integrator, LinearResponseMatchesFrequencyResponse) {
    const StructureParams p = build_params(state_condition(1), baseline());
    for (double f : {35.0, 90.0}) {
        const oracle::FrfCheck c = oracle::check_frf(p, f);
        EXPECT_LT(c.max_amplitude_error, 0.02) << f << " Hz";
        EXPECT_LT(c.max_phase_error_rad, 0.02) << f << " Hz";
    }
}

TEST(Integrator, HalvingStepBarelyChangesResponse) {
    ExcitationConfig ex;
    ex.seed = 5;
    const auto force = generate_excitation(ex);
    const StructureParams p = build_params(state_condition(1), baseline());
    SimulationOptions fine;
    fine.substeps = 2;
    const TrialRecord a = simulate_trial(p, force);
    const TrialRecord b = simulate_trial(p, force, fine);
    for (std::size_t ch = 1; ch < kChannelCount; ++ch) {
        const double ra = oracle::rms(a.channels[ch]);
        const double rb = oracle::rms(b.channels[ch]);
        EXPECT_LT(std::abs(ra - rb) / rb, 0.005) << "channel " << ch + 1;
    }
}

TEST(Integrator, ContactChangesResponseOnlyWithBumper) {
    EXPECT_EQ(oracle::nonlinearity_nrms(build_params(state_condition(1), baseline()), 3), 0.0);
    EXPECT_GT(oracle::nonlinearity_nrms(build_params(state_condition(14), baseline()), 3), 0.05);
}

TEST(Filter, UnitDcGainAndStopband) {
    const auto taps = design_lowpass(140.0, 2560.0, 511);
    ASSERT_EQ(taps.size(), 511u);
    double dc = 0.0;
    for (double t : taps) dc += t;
    EXPECT_NEAR(dc, 1.0, 1e-12);
    for (std::size_t i = 0; i < taps.size(); ++i) EXPECT_NEAR(taps[i], taps[taps.size() - 1 - i], 1e-15);
    auto gain = [&](double f) {
        std::complex<double> g = 0.0;
        for (std::size_t i = 0; i < taps.size(); ++i) {
            g += taps[i] * std::exp(std::complex<double>(0.0, -2.0 * M_PI * f / 2560.0 * static_cast<double>(i)));
        }
        return std::abs(g);
    };
    EXPECT_NEAR(gain(100.0), 1.0, 1e-4);
    EXPECT_LT(gain(200.0), 1e-4);
    EXPECT_THROW(design_lowpass(140.0, 2560.0, 10), ConfigError);
}

TEST(Filter, DecimatesConstantSignalExactly) {
    const std::vector<double> flat(800, 3.0);
    const auto taps = design_lowpass(140.0, 2560.0, 511);
    const auto out = filter_decimate(flat, taps, 8);
    ASSERT_EQ(out.size(), 100u);
    for (double v : out) EXPECT_NEAR(v, 3.0, 1e-12);
}

TEST(Dataset, SeedsAreDistinctAndStable) {
    std::set<std::uint64_t> seen;
    for (int s = 1; s <= 17; ++s) {
        for (int t = 1; t <= 50; ++t) seen.insert(derive_trial_seed(7, s, t));
    }
    EXPECT_EQ(seen.size(), 17u * 50u);
    EXPECT_EQ(derive_trial_seed(7, 3, 4), derive_trial_seed(7, 3, 4));
    EXPECT_NE(derive_trial_seed(7, 3, 4), derive_trial_seed(8, 3, 4));
}

TEST(Dataset, RowsOrderAndDeterminism) {
    DatasetConfig cfg;
    cfg.trials_per_state = 2;
    cfg.stride = 256;
    cfg.states = {14, 2};
    cfg.master_seed = 11;
    std::vector<std::pair<int, int>> order;
    const auto table = generate_dataset(cfg, [&](const TrialRecord& r) { order.emplace_back(r.state, r.trial); });
    EXPECT_EQ(table.size(), 2u * 2u * 32u);
    EXPECT_EQ(order, (std::vector<std::pair<int, int>>{{14, 1}, {14, 2}, {2, 1}, {2, 2}}));
    EXPECT_EQ(table.rows.front().label, 1);
    EXPECT_EQ(table.rows.back().label, 0);
    EXPECT_EQ(table.rows[1].sample_idx, 256);
    EXPECT_DOUBLE_EQ(table.rows[1].time(), 0.8);

    cfg.jobs = 3;
    const auto again = generate_dataset(cfg);
    ASSERT_EQ(again.size(), table.size());
    for (std::size_t i = 0; i < table.size(); ++i) EXPECT_EQ(again.rows[i].features, table.rows[i].features);

    EXPECT_NE(table.rows[3].features, table.rows[32 + 3].features);
}

TEST(Dataset, InvalidConfigRejected) {
    DatasetConfig cfg;
    cfg.trials_per_state = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = DatasetConfig{};
    cfg.stride = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = DatasetConfig{};
    cfg.states = {18};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Dataset, TrialRecordFile) {
    TrialRecord rec;
    rec.state = 3;
    rec.trial = 2;
    rec.seed = 99;
    for (auto& ch : rec.channels) ch = {0.5, -0.25};
    std::ostringstream out;
    write_trial_record(out, rec, CalibrationRecord{});
    const std::string text = out.str();
    EXPECT_NE(text.find("# state=3\n"), std::string::npos);
    EXPECT_NE(text.find("# seed=99\n"), std::string::npos);
    EXPECT_NE(text.find("youngs_modulus_pa=6.9e+10"), std::string::npos);
    EXPECT_NE(text.find("time_s,ch1,ch2,ch3,ch4,ch5\n0,0.5,0.5,0.5,0.5,0.5\n0.003125,-0.25"), std::string::npos);
}
