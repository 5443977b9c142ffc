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

#ifndef CCZS_GATESET_HPP
#define CCZS_GATESET_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cczs/core.hpp"

namespace cczs {

/// Noisy single-qubit gate set for one qubit. Rotations are 4x4 Pauli
/// transfer matrices R_ab = Tr(P_a G(P_b)) / 2 in the order I, X, Y, Z.
struct QubitGateSet {
    CMatrix rho0 = CMatrix::Zero(2, 2);
    CMatrix m0 = CMatrix::Zero(2, 2);  // POVM element for outcome 0; outcome 1 is I - m0
    std::map<std::string, RMatrix> ptm;

    /// Apply a named rotation to a 2x2 operator.
    CMatrix apply(const std::string& gate, const CMatrix& op) const;
    /// Heisenberg-picture action: Tr(E G(rho)) = Tr(adjoint(G, E) rho).
    CMatrix apply_adjoint(const std::string& gate, const CMatrix& effect) const;
};

/// Gate names used by tomography.
inline const std::array<std::string, 6> kGateNames = {"I", "Ry(pi)", "Ry(pi/2)", "Ry(-pi/2)", "Rx(pi/2)", "Rx(-pi/2)"};
/// Preparation rotations giving |g>, |e>, |+>, |+i>.
inline const std::array<std::string, 4> kPrepGates = {"I", "Ry(pi)", "Ry(pi/2)", "Rx(-pi/2)"};
/// Pre-measurement rotations for the X, Y, Z bases.
inline const std::array<std::string, 3> kMeasGates = {"Ry(-pi/2)", "Rx(pi/2)", "I"};

struct NoisyGateSetModel {
    std::array<QubitGateSet, 3> qubits;
    /// Adjustments made while loading (Hermitization, TP re-projection).
    std::vector<std::string> adjustments;

    static NoisyGateSetModel ideal();

    /// Build from raw per-qubit tables. rho0 and m0 are replaced by their
    /// Hermitian parts; missing opposite-sign rotations are filled with the
    /// transpose of the listed one and re-projected to trace preservation.
    static NoisyGateSetModel from_tables(const std::array<CMatrix, 3>& rho0, const std::array<CMatrix, 3>& m0,
                                         const std::array<std::map<std::string, RMatrix>, 3>& ptm);

    void validate(double tp_tol = 1e-6) const;

    /// The 64 three-qubit probe states, index i = 16 i0 + 4 i1 + i2.
    std::vector<CMatrix> probe_states() const;
    /// The 27 x 8 measurement effects, basis j = 9 j0 + 3 j1 + j2 (X=0, Y=1, Z=2),
    /// outcome s = 4 s0 + 2 s1 + s2. Returned as effects[j * 8 + s].
    std::vector<CMatrix> effects() const;
    /// Per-qubit single-qubit probe states and effects.
    std::array<std::array<CMatrix, 4>, 3> qubit_probes() const;
    std::array<std::array<CMatrix, 6>, 3> qubit_effects() const;  // [basis * 2 + outcome]
};

/// Ideal PTM of a named single-qubit rotation.
RMatrix ideal_ptm(const std::string& gate);
/// PTM of a 2x2 unitary.
RMatrix unitary_ptm(const CMatrix& u);
/// Pauli vector r_a = Tr(P_a rho) and its inverse.
RVector pauli_vector(const CMatrix& op);
CMatrix from_pauli_vector(const RVector& r);

}  // namespace cczs

#endif
