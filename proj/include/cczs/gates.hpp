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

#ifndef CCZS_GATES_HPP
#define CCZS_GATES_HPP

#include <string>

#include "cczs/core.hpp"

namespace cczs {

/// CCZS family parameters in radians.
struct GateParams {
    double theta = kPi / 2;
    double phi = 0.0;
    double gamma = 0.0;

    /// theta in [0, pi], phi and gamma in (-pi, pi]. Describes the same unitary.
    GateParams canonical() const;
};

/// Effective drive on the two couplers. Couplings in rad/s, detunings in
/// rad/s, tau in seconds.
struct DriveConfig {
    Complex j01{0.0, 0.0};
    Complex j02{0.0, 0.0};
    double delta1 = 0.0;
    double delta2 = 0.0;
    double tau = 0.0;
};

/// Wrap to (-pi, pi].
double wrap_angle(double a);

/// Two-qubit block acting on (Q1, Q2).
CMatrix build_czs(const GateParams& p);
/// |0><0| (x) I4 + |1><1| (x) CZS with Q0 most significant.
CMatrix build_cczs(const GateParams& p);

/// pi / sqrt(|J01|^2 + |J02|^2 + (delta/2)^2). Requires delta1 == delta2.
double gate_time(const DriveConfig& d);

/// Angles realized by the exact effective propagator for a symmetric detuning:
///   tan(theta/2) = |J02| / |J01|
///   phi          = arg J01 - arg J02 + pi
///   gamma        = -pi delta / sqrt(4(|J01|^2 + |J02|^2) + delta^2)
GateParams angles_from_drives(const DriveConfig& d);

/// Inverse of angles_from_drives for a given duration; J01 is real positive.
/// Throws if |gamma| is too large to be reached within tau.
DriveConfig drives_for_angles(const GateParams& p, double tau);

/// Names: I, Rx, Ry, Rz, X on a qubit (levels = 2) or on the 0/1 subspace of a
/// qutrit (levels = 3, identity on |2>); X12 is qutrit-only and swaps 1 <-> 2.
/// Rz(a) = diag(exp(-ia/2), exp(ia/2)).
CMatrix single_qubit_gate(const std::string& name, double angle = 0.0, int levels = 2);

/// Hermitian generator G with exp(-i G) = single_qubit_gate(name, angle, levels).
CMatrix single_qubit_generator(const std::string& name, double angle = 0.0, int levels = 2);

/// Lift an operator on n qubits into n qutrits: acts as U on the 0/1 subspace
/// and as the identity on every basis state containing a 2.
CMatrix embed_computational(const CMatrix& u, int n_qubits = 3);
/// Restrict an n-qutrit operator to the computational subspace.
CMatrix restrict_computational(const CMatrix& u, int n_qutrits = 3);
/// Qutrit flat indices of the 2^n computational states, in qubit order.
std::vector<int> computational_indices(int n = 3);

/// Per-qubit Z phases that zero the phases of |001>, |010>, |100> relative
/// to |000> in a three-qubit unitary, and the corrected unitary.
struct FrameCorrection {
    double angles[3] = {0.0, 0.0, 0.0};
    CMatrix corrected;
};
FrameCorrection virtual_z_correction(const CMatrix& u8);

}  // namespace cczs

#endif
