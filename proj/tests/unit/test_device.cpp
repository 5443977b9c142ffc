// Copyright 2026 The cczs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>

#include "cczs/device.hpp"
#include "cczs/io.hpp"
#include "cczs/lambda.hpp"

using namespace cczs;

namespace {

constexpr double kTwoPi = 2 * kPi;

DeviceFile bundled_device() { return load_device(std::string(CCZS_DATA_DIR) + "/device.json"); }

DeviceParams pair(double wa, double wb, double j, int levels = 3) {
    DeviceParams p;
    p.modes = {{"A", wa, -kTwoPi * 0.2e9, levels, false}, {"B", wb, -kTwoPi * 0.2e9, levels, false}};
    p.couplings = {{0, 1, j}};
    return p;
}

TEST(Hamiltonian, UncoupledIsDiagonalWithBareSums) {
    auto p = bundled_device().device;
    for (auto& c : p.couplings) c.j = 0;
    const CMatrix h = build_hamiltonian(p, {0.1, 0.2});
    EXPECT_LE((h - CMatrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
    const int s = p.basis_index({{"Q0", 2}, {"C2", 1}});
    const double wc2 = coupler_frequency(p.modes[p.mode_index("C2")].omega, 0.2);
    const auto& q0 = p.modes[p.mode_index("Q0")];
    EXPECT_NEAR(h(s, s).real(), 2 * q0.omega + q0.eta + wc2, 1e-3);
}

TEST(Hamiltonian, HermitianForRandomParams) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (int k = 0; k < 5; ++k) {
        auto p = bundled_device().device;
        for (auto& m : p.modes) m.omega *= u(rng);
        for (auto& c : p.couplings) c.j *= u(rng);
        EXPECT_TRUE(is_hermitian(build_hamiltonian(p, {0.3 * u(rng), 0.1 * u(rng)}), 1e-6));
    }
}

TEST(Hamiltonian, MatchesLadderOperatorOracle) {
    const auto p = pair(kTwoPi * 4.2e9, kTwoPi * 4.5e9, kTwoPi * 30e6);
    CMatrix a = CMatrix::Zero(3, 3);
    a(0, 1) = 1;
    a(1, 2) = std::sqrt(2.0);
    const CMatrix n = a.adjoint() * a;
    const CMatrix id = CMatrix::Identity(3, 3);
    auto duffing = [&](const Mode& m) {
        return CMatrix(m.omega * n + 0.5 * m.eta * n * (n - id));
    };
    const CMatrix x = a + a.adjoint();
    const CMatrix oracle = kron(duffing(p.modes[0]), id) + kron(id, duffing(p.modes[1])) + p.couplings[0].j * kron(x, x);
    EXPECT_LE((build_hamiltonian(p, {}) - oracle).cwiseAbs().maxCoeff(), 1e-14 * oracle.cwiseAbs().maxCoeff());
}

TEST(Hamiltonian, AvoidedCrossingGapIsTwoJ) {
    const double w = kTwoPi * 5e9, j = kTwoPi * 20e6;
    const auto e = hermitian_eig(build_hamiltonian(pair(w, w, j), {})).values;
    // single-excitation doublet: levels 1 and 2 in ascending order
    EXPECT_NEAR((e(2) - e(1)) / (2 * j), 1.0, 1e-2);
}

TEST(Hamiltonian, RejectsOversizedSystems) {
    auto p = bundled_device().device;
    p.modes.push_back(p.modes[0]);
    EXPECT_THROW(build_hamiltonian(p, {0, 0}), std::invalid_argument);
    auto q = pair(1e9, 1e9, 1e6, 5);
    EXPECT_THROW(build_hamiltonian(q, {}), std::invalid_argument);
}

TEST(CouplerFrequency, DirectEvaluationAndMonotone) {
    EXPECT_DOUBLE_EQ(coupler_frequency(10.0, 0.0), 10.0);
    EXPECT_NEAR(coupler_frequency(10.0, 0.3), 10.0 * std::sqrt(std::cos(0.3 * kPi)), 1e-14);
    double prev = coupler_frequency(1.0, 0.0);
    for (int i = 1; i < 500; ++i) {
        const double f = coupler_frequency(1.0, 0.5 * i / 500.0);
        EXPECT_LT(f, prev);
        prev = f;
    }
}

TEST(FluxPulseTest, EnvelopeAndValidation) {
    FluxPulse fp;
    fp.amplitude = 0.1;
    fp.flat = 100e-9;
    EXPECT_DOUBLE_EQ(fp.envelope(0.0), 0.0);
    EXPECT_NEAR(fp.envelope(12.5e-9), 0.05, 1e-15);
    EXPECT_DOUBLE_EQ(fp.envelope(60e-9), 0.1);
    EXPECT_NEAR(fp.envelope(fp.duration()), 0.0, 1e-15);
    fp.bias = 0.45;
    EXPECT_THROW(fp.validate(), std::invalid_argument);
    fp.bias = 0.1;
    fp.rise = -1;
    EXPECT_THROW(fp.validate(), std::invalid_argument);
}

TEST(Evolve, EigenstateIsStationaryAndEnergyConserved) {
    const auto p = bundled_device().device.subset({"Q1", "C1", "Q0"});
    FluxPulse idle;
    idle.bias = 0.25;
    const CMatrix h = build_hamiltonian(p, {0.25});
    const auto eig = hermitian_eig(h);
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(i * 20e-9);

    const CVector ground = eig.vectors.col(0);
    const auto t1 = evolve_device(p, {idle}, ground, times);
    for (const auto& s : t1.states) EXPECT_NEAR(std::norm(ground.dot(s)), 1.0, 1e-7);

    CVector sup = (eig.vectors.col(3) + eig.vectors.col(7) + eig.vectors.col(11)) / std::sqrt(3.0);
    // the conservation check runs at twice the minimum sampling rate
    EvolveOptions fine;
    fine.samples_per_period = 100;
    const auto t2 = evolve_device(p, {idle}, sup, times, fine);
    const double e0 = sup.dot(h * sup).real();
    for (const auto& s : t2.states) {
        EXPECT_NEAR(s.dot(h * s).real() / e0, 1.0, 1e-8);
        EXPECT_NEAR(s.norm(), 1.0, 1e-7);
    }
}

TEST(Evolve, InputValidation) {
    const auto p = bundled_device().device.subset({"Q1", "C1", "Q0"});
    CVector psi = CVector::Zero(27);
    psi(0) = 1;
    EXPECT_THROW(evolve_device(p, {FluxPulse{}, FluxPulse{}}, psi, {1e-9}), std::invalid_argument);
    EXPECT_THROW(evolve_device(p, {}, CVector::Zero(9), {1e-9}), std::invalid_argument);
    EXPECT_THROW(evolve_device(p, {}, CVector(2 * psi), {1e-9}), std::invalid_argument);
    EXPECT_THROW(evolve_device(p, {}, psi, {2e-9, 1e-9}), std::invalid_argument);
}

TEST(ExtractCoupling, SyntheticRabi) {
    const double j = kTwoPi * 2.833e6;
    std::vector<double> t, pop;
    for (int i = 0; i < 200; ++i) {
        t.push_back(i * 2e-9);
        pop.push_back(std::pow(std::sin(j * t.back()), 2));
    }
    const auto f = extract_effective_coupling(t, pop);
    EXPECT_NEAR(f.j_eff / j, 1.0, 1e-2);
    EXPECT_NEAR(kPi / f.j_eff, kPi / j, 1e-2 * kPi / j);
    std::vector<double> flat(t.size(), 0.0);
    EXPECT_THROW(extract_effective_coupling(t, flat), NumericalError);
}

struct DriveSetup {
    DeviceParams p;
    int a, b;
};

DriveSetup q1_c1_q0() {
    DriveSetup s{bundled_device().device.subset({"Q1", "C1", "Q0"}), 0, 0};
    s.a = s.p.basis_index({{"Q1", 1}, {"Q0", 1}});
    s.b = s.p.basis_index({{"Q0", 2}});
    return s;
}

double driven_coupling(const DriveSetup& s, double amplitude, double window) {
    FluxPulse fp;
    fp.bias = 0.25;
    fp.amplitude = amplitude;
    fp.rise = fp.fall = 0;
    fp.flat = window;
    fp.omega_d = dressed_transition(s.p, {fp.bias}, s.a, s.b);
    CVector psi = CVector::Zero(s.p.dims().total());
    psi(s.a) = 1;
    std::vector<double> times;
    for (int i = 0; i <= 160; ++i) times.push_back(window * i / 160);
    const auto traj = evolve_device(s.p, {fp}, psi, times);
    const auto f = extract_effective_coupling(times, traj.population(s.b));
    EXPECT_GT(f.amplitude, 0.98) << "drive is not resonant at amplitude " << amplitude;
    return f.j_eff;
}

TEST(ParametricDrive, CouplingIsLinearInSmallAmplitude) {
    // J(amp) = a amp (1 + c amp^2): the doubling ratio tends to 2 and its
    // excess shrinks about fourfold per halving of the amplitude
    const auto s = q1_c1_q0();
    const double j1 = driven_coupling(s, 0.02, 16e-6);
    const double j2 = driven_coupling(s, 0.04, 4.5e-6);
    const double j4 = driven_coupling(s, 0.08, 2.5e-6);
    const double small = j2 / j1 - 2, large = j4 / j2 - 2;
    EXPECT_NEAR(small, 0.0, 0.1);
    EXPECT_GT(large, 0.0);
    EXPECT_LT(std::abs(small), 0.4 * std::abs(large));
}

// Each coupler is calibrated on its own three-mode subsystem; both drives are
// then applied to the full five-mode device and compared against the
// three-level model built from the fitted couplings.
TEST(ParametricDrive, LambdaModelReproducesFullDevice) {
    const auto dev = bundled_device();
    const double bias = 0.25, amp = 0.08, window = 2.5e-6, step = kTwoPi * 0.1e6;
    const auto pa = dev.device.subset({"Q1", "C1", "Q0"});
    const auto pb = dev.device.subset({"Q0", "C2", "Q2"});
    const int a11 = pa.basis_index({{"Q1", 1}, {"Q0", 1}}), a20 = pa.basis_index({{"Q0", 2}});
    const int b11 = pb.basis_index({{"Q2", 1}, {"Q0", 1}}), b20 = pb.basis_index({{"Q0", 2}});
    FluxPulse base;
    base.bias = bias;
    base.amplitude = amp;
    const auto ca = calibrate_parametric_drive(pa, {base}, 0, a11, a20, window, step);
    const auto cb = calibrate_parametric_drive(pb, {base}, 0, b11, b20, window, step);
    EXPECT_GT(ca.transfer, 0.98);
    EXPECT_GT(cb.transfer, 0.98);

    const auto& p = dev.device;
    const int s110 = p.basis_index({{"Q0", 1}, {"Q1", 1}});
    const int s200 = p.basis_index({{"Q0", 2}});
    const int s101 = p.basis_index({{"Q0", 1}, {"Q2", 1}});
    FluxPulse f1 = base, f2 = base;
    f1.rise = f1.fall = f2.rise = f2.fall = 0;
    f1.omega_d = dressed_transition(p, {bias, bias}, s110, s200) + ca.omega_d - dressed_transition(pa, {bias}, a11, a20);
    f2.omega_d = dressed_transition(p, {bias, bias}, s101, s200) + cb.omega_d - dressed_transition(pb, {bias}, b11, b20);
    const double tg = kPi / std::hypot(ca.j_eff, cb.j_eff);
    f1.flat = f2.flat = tg;

    std::vector<double> times;
    for (int i = 0; i <= 50; ++i) times.push_back(tg * i / 50);
    CVector psi = CVector::Zero(p.dims().total());
    psi(s110) = 1;
    const auto traj = evolve_device(p, {f1, f2}, psi, times);
    const auto model = populations({ca.j_eff, cb.j_eff, 0, 0}, LambdaState{}, times);
    const auto p1 = traj.population(s110), p2 = traj.population(s200), p3 = traj.population(s101);
    double worst = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        worst = std::max({worst, std::abs(p1[i] - model[i][0]), std::abs(p2[i] - model[i][1]),
                          std::abs(p3[i] - model[i][2])});
    }
    EXPECT_LE(worst, 0.05);
    EXPECT_GT(p3.back(), 0.9);
    EXPECT_LE(traj.max_norm_drift, 1e-7);
}

}  // namespace
