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

#include <random>

#include "cczs/gates.hpp"
#include "cczs/noise.hpp"

using namespace cczs;

namespace {

double maxabs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix exact_gate(const DriveConfig& d) {
    return restrict_computational(expm_hermitian(build_heff(d), gate_time(d)), 3);
}

TEST(Czs, SwapBlockAtHalfPi) {
    const double phi = 0.7;
    const CMatrix u = build_czs({kPi / 2, phi, 0});
    CMatrix want = CMatrix::Zero(4, 4);
    want(0, 0) = 1;
    want(1, 2) = std::exp(-kI * phi);
    want(2, 1) = std::exp(kI * phi);
    want(3, 3) = -1;
    EXPECT_LE(maxabs(u - want), 1e-15);
}

TEST(Czs, FermionicSwap) {
    const CMatrix u = build_czs({kPi / 2, 0, 0});
    CMatrix want = CMatrix::Zero(4, 4);
    want(0, 0) = 1;
    want(1, 2) = want(2, 1) = 1;
    want(3, 3) = -1;
    EXPECT_LE(maxabs(u - want), 1e-15);
}

TEST(Czs, PrintedEntries) {
    const double t = 0.3, f = 1.1, g = 0.7;
    const CMatrix u = build_czs({t, f, g});
    const Complex eg = std::exp(kI * g);
    EXPECT_LE(std::abs(u(1, 1) - (-eg * std::pow(std::sin(t / 2), 2) + std::pow(std::cos(t / 2), 2))), 1e-15);
    EXPECT_LE(std::abs(u(2, 2) - (-eg * std::pow(std::cos(t / 2), 2) + std::pow(std::sin(t / 2), 2))), 1e-15);
    EXPECT_LE(std::abs(u(1, 2) - std::exp(kI * (g / 2 - f)) * std::cos(g / 2) * std::sin(t)), 1e-15);
    EXPECT_LE(std::abs(u(2, 1) - std::exp(kI * (g / 2 + f)) * std::cos(g / 2) * std::sin(t)), 1e-15);
    EXPECT_LE(std::abs(u(3, 3) + std::exp(-kI * g)), 1e-15);
    EXPECT_LE(unitarity_error(u), 1e-12);
}

TEST(Cczs, ControlStructureAndUnitarity) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> a(-2 * kPi, 2 * kPi);
    for (int k = 0; k < 100; ++k) {
        const GateParams p{a(rng), a(rng), a(rng)};
        const CMatrix u = build_cczs(p);
        EXPECT_LE(maxabs(u.topLeftCorner(4, 4) - CMatrix::Identity(4, 4)), 0.0);
        EXPECT_LE(maxabs(u.topRightCorner(4, 4)), 0.0);
        EXPECT_LE((u * u.adjoint() - CMatrix::Identity(8, 8)).norm(), 1e-12);
        EXPECT_LE((build_czs(p).adjoint() * build_czs(p) - CMatrix::Identity(4, 4)).norm(), 1e-12);
    }
}

TEST(Cczs, QptTargetEntries) {
    const CMatrix u = build_cczs({kPi / 2, kPi / 2, 0});
    EXPECT_LE(std::abs(u(5, 6) - Complex(0, -1)), 1e-15);
    EXPECT_LE(std::abs(u(6, 5) - Complex(0, 1)), 1e-15);
    EXPECT_LE(std::abs(u(7, 7) + 1.0), 1e-15);
}

TEST(Czs, SquareUndoesSwapAtHalfPi) {
    for (double phi : {0.0, 0.4, 2.0}) {
        const CMatrix u = build_czs({kPi / 2, phi, 0});
        EXPECT_LE(maxabs(u * u - CMatrix::Identity(4, 4)), 1e-12);
    }
}

TEST(Canonical, RangesAndSameUnitary) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> a(-10, 10);
    for (int k = 0; k < 200; ++k) {
        const GateParams p{a(rng), a(rng), a(rng)};
        const GateParams c = p.canonical();
        EXPECT_GE(c.theta, 0.0);
        EXPECT_LE(c.theta, kPi);
        EXPECT_GT(c.phi, -kPi);
        EXPECT_LE(c.phi, kPi);
        EXPECT_GT(c.gamma, -kPi);
        EXPECT_LE(c.gamma, kPi);
        EXPECT_LE(maxabs(build_cczs(p) - build_cczs(c)), 1e-12);
    }
    EXPECT_DOUBLE_EQ((GateParams{kPi, 0, 0}.canonical().theta), kPi);
    EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
}

TEST(GateTime, Examples) {
    const double j = 2 * kPi * 2.833e6;
    DriveConfig d;
    d.j01 = j;
    d.j02 = j;
    const double t_cczs = gate_time(d);
    d.j02 = 0;
    const double t_cz = gate_time(d);
    EXPECT_NEAR(t_cz, kPi / j, 1e-20);
    EXPECT_NEAR(t_cz / t_cczs, std::sqrt(2.0), 1e-14);
    d.delta1 = d.delta2 = 2 * j;
    EXPECT_NEAR(gate_time(d), kPi / (std::sqrt(2.0) * j), 1e-20);
    d.delta2 = 0;
    EXPECT_THROW(gate_time(d), std::invalid_argument);
    EXPECT_THROW(gate_time(DriveConfig{}), std::invalid_argument);
}

TEST(AnglesFromDrives, Limits) {
    DriveConfig d;
    d.j01 = 1e7;
    d.j02 = 1e7 * std::exp(kI * 0.3);
    const auto p = angles_from_drives(d);
    EXPECT_NEAR(p.theta, kPi / 2, 1e-14);
    EXPECT_NEAR(p.gamma, 0.0, 1e-14);
    d.j02 = 0;
    EXPECT_NEAR(angles_from_drives(d).theta, 0.0, 1e-14);
    d.j01 = 0;
    d.j02 = 1e7;
    EXPECT_NEAR(angles_from_drives(d).theta, kPi, 1e-14);
    EXPECT_THROW(angles_from_drives(DriveConfig{}), std::invalid_argument);
}

// The angle convention anchor: the printed family, after virtual-Z frame
// correction, equals the exact propagator of the effective Hamiltonian.
TEST(SelfConsistency, ExactPropagatorMatchesFamily) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; ++k) {
        DriveConfig d;
        const double s = 2 * kPi * 3e6;
        d.j01 = Complex(u(rng), u(rng)) * s;
        d.j02 = Complex(u(rng), u(rng)) * s;
        d.delta1 = d.delta2 = u(rng) * s;
        const CMatrix exact = virtual_z_correction(exact_gate(d)).corrected;
        const CMatrix family = build_cczs(angles_from_drives(d));
        EXPECT_LE(maxabs(exact - family), 1e-8) << k;
        // V-system corner
        EXPECT_LE(std::abs(exact_gate(d)(7, 7) + std::exp(-kI * angles_from_drives(d).gamma)), 1e-8);
    }
}

TEST(SelfConsistency, AsymmetricGolden) {
    DriveConfig d;
    d.j01 = 2 * kPi * 1e6;
    d.j02 = 2 * kPi * 2e6;
    const auto p = angles_from_drives(d);
    EXPECT_NEAR(std::tan(p.theta / 2), 2.0, 1e-12);
    EXPECT_LE(maxabs(virtual_z_correction(exact_gate(d)).corrected - build_cczs(p)), 1e-8);
}

TEST(DrivesForAngles, RoundTrip) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int k = 0; k < 50; ++k) {
        const GateParams p{u(rng) * kPi, (2 * u(rng) - 1) * kPi, (u(rng) - 0.5) * kPi};
        const auto d = drives_for_angles(p, 250e-9);
        EXPECT_NEAR(gate_time(d), 250e-9, 1e-18);
        const auto back = angles_from_drives(d);
        EXPECT_NEAR(back.theta, p.theta, 1e-10);
        EXPECT_NEAR(wrap_angle(back.phi - p.phi), 0, 1e-10);
        EXPECT_NEAR(back.gamma, p.gamma, 1e-10);
    }
    EXPECT_THROW(drives_for_angles({kPi / 2, 0, 0}, 0.0), std::invalid_argument);
}

TEST(SingleQubit, Examples) {
    CVector zero(2);
    zero << 1, 0;
    const CVector one = single_qubit_gate("Ry", kPi) * zero;
    EXPECT_NEAR(std::norm(one(1)), 1.0, 1e-15);
    CVector q1 = CVector::Zero(3);
    q1(1) = 1;
    EXPECT_NEAR(std::norm((single_qubit_gate("X12", 0, 3) * q1)(2)), 1.0, 1e-15);
    EXPECT_LE(maxabs(single_qubit_gate("Rz", 0.9) * single_qubit_gate("Rz", -0.9) - CMatrix::Identity(2, 2)), 1e-15);
    for (const char* n : {"I", "Rx", "Ry", "Rz", "X", "X12"}) {
        const CMatrix g = single_qubit_gate(n, 0.37, 3);
        EXPECT_LE(unitarity_error(g), 1e-14) << n;
        EXPECT_LE(maxabs(expm_hermitian(single_qubit_generator(n, 0.37, 3), 1.0) - g), 1e-12) << n;
    }
    EXPECT_THROW(single_qubit_gate("H"), std::invalid_argument);
    EXPECT_THROW(single_qubit_gate("X12", 0, 2), std::invalid_argument);
}

TEST(Embed, ComputationalSubspace) {
    EXPECT_LE(maxabs(embed_computational(CMatrix::Identity(8, 8)) - CMatrix::Identity(27, 27)), 0.0);
    const CMatrix e = embed_computational(build_cczs({kPi / 2, 0.3, 0.2}));
    const int s200 = HilbertDims{3, 3, 3}.index({2, 0, 0});
    EXPECT_NEAR(std::abs(e(s200, s200) - 1.0), 0.0, 1e-15);
    const CMatrix r = random_unitary(8, 5);
    EXPECT_LE(unitarity_error(embed_computational(r)), 1e-12);
    EXPECT_LE(maxabs(restrict_computational(embed_computational(r)) - r), 0.0);
    EXPECT_THROW(embed_computational(CMatrix::Ones(8, 8)), std::invalid_argument);
}

}  // namespace
