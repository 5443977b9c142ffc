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

#include "cczs/gateset.hpp"

#include <cmath>
#include <stdexcept>

#include "cczs/gates.hpp"

namespace cczs {

RVector pauli_vector(const CMatrix& op) {
    RVector r(4);
    for (int a = 0; a < 4; ++a) {
        r(a) = (pauli(a) * op).trace().real();
    }
    return r;
}

CMatrix from_pauli_vector(const RVector& r) {
    CMatrix op = CMatrix::Zero(2, 2);
    for (int a = 0; a < 4; ++a) {
        op += 0.5 * r(a) * pauli(a);
    }
    return op;
}

RMatrix unitary_ptm(const CMatrix& u) {
    RMatrix r(4, 4);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            r(a, b) = 0.5 * (pauli(a) * u * pauli(b) * u.adjoint()).trace().real();
        }
    }
    return r;
}

RMatrix ideal_ptm(const std::string& gate) {
    if (gate == "I") return unitary_ptm(single_qubit_gate("I"));
    if (gate == "Ry(pi)") return unitary_ptm(single_qubit_gate("Ry", kPi));
    if (gate == "Ry(pi/2)") return unitary_ptm(single_qubit_gate("Ry", kPi / 2));
    if (gate == "Ry(-pi/2)") return unitary_ptm(single_qubit_gate("Ry", -kPi / 2));
    if (gate == "Rx(pi/2)") return unitary_ptm(single_qubit_gate("Rx", kPi / 2));
    if (gate == "Rx(-pi/2)") return unitary_ptm(single_qubit_gate("Rx", -kPi / 2));
    throw std::invalid_argument("ideal_ptm: unknown gate '" + gate + "'");
}

CMatrix QubitGateSet::apply(const std::string& gate, const CMatrix& op) const {
    const auto it = ptm.find(gate);
    if (it == ptm.end()) {
        throw std::invalid_argument("QubitGateSet: no rotation '" + gate + "'");
    }
    // Complex operators split into Hermitian pieces so the real PTM applies.
    const CMatrix h1 = 0.5 * (op + op.adjoint());
    const CMatrix h2 = -0.5 * kI * (op - op.adjoint());
    return from_pauli_vector(it->second * pauli_vector(h1)) + kI * from_pauli_vector(it->second * pauli_vector(h2));
}

CMatrix QubitGateSet::apply_adjoint(const std::string& gate, const CMatrix& effect) const {
    const auto it = ptm.find(gate);
    if (it == ptm.end()) {
        throw std::invalid_argument("QubitGateSet: no rotation '" + gate + "'");
    }
    const CMatrix h1 = 0.5 * (effect + effect.adjoint());
    const CMatrix h2 = -0.5 * kI * (effect - effect.adjoint());
    const RMatrix rt = it->second.transpose();
    return from_pauli_vector(rt * pauli_vector(h1)) + kI * from_pauli_vector(rt * pauli_vector(h2));
}

NoisyGateSetModel NoisyGateSetModel::ideal() {
    NoisyGateSetModel m;
    for (auto& q : m.qubits) {
        q.rho0 = CMatrix::Zero(2, 2);
        q.rho0(0, 0) = 1.0;
        q.m0 = q.rho0;
        for (const auto& g : kGateNames) {
            q.ptm[g] = ideal_ptm(g);
        }
    }
    return m;
}

NoisyGateSetModel NoisyGateSetModel::from_tables(const std::array<CMatrix, 3>& rho0,
                                                 const std::array<CMatrix, 3>& m0,
                                                 const std::array<std::map<std::string, RMatrix>, 3>& ptm) {
    NoisyGateSetModel m;
    const std::pair<const char*, const char*> opposite[] = {
        {"Ry(pi/2)", "Ry(-pi/2)"}, {"Ry(-pi/2)", "Ry(pi/2)"}, {"Rx(pi/2)", "Rx(-pi/2)"}, {"Rx(-pi/2)", "Rx(pi/2)"}};
    for (int q = 0; q < 3; ++q) {
        auto& g = m.qubits[q];
        const std::string tag = "Q" + std::to_string(q);
        g.rho0 = 0.5 * (rho0[q] + rho0[q].adjoint());
        if ((g.rho0 - rho0[q]).norm() > 0) {
            m.adjustments.push_back(tag + " rho0 replaced by its Hermitian part");
        }
        g.m0 = 0.5 * (m0[q] + m0[q].adjoint());
        if ((g.m0 - m0[q]).norm() > 0) {
            m.adjustments.push_back(tag + " M0 replaced by its Hermitian part");
        }
        g.ptm = ptm[q];
        if (!g.ptm.count("I")) {
            g.ptm["I"] = ideal_ptm("I");
            m.adjustments.push_back(tag + " idle gate taken as ideal");
        }
        for (const auto& [have, want] : opposite) {
            if (!g.ptm.count(want) && ptm[q].count(have)) {
                RMatrix t = ptm[q].at(have).transpose();
                t.row(0) << 1.0, 0.0, 0.0, 0.0;
                g.ptm[want] = t;
                m.adjustments.push_back(tag + " " + want + " = transpose of " + have + ", first row reset to (1,0,0,0)");
            }
        }
        for (const auto& name : kGateNames) {
            if (!g.ptm.count(name)) {
                throw std::invalid_argument("NoisyGateSetModel: " + tag + " is missing rotation " + name);
            }
        }
    }
    m.validate();
    return m;
}

void NoisyGateSetModel::validate(double tp_tol) const {
    for (int q = 0; q < 3; ++q) {
        const auto& g = qubits[q];
        DensityMatrix(g.rho0, HilbertDims{2}).validate(1e-9);
        const auto e0 = hermitian_eig(g.m0);
        if (e0.values.minCoeff() < -1e-9 || e0.values.maxCoeff() > 1 + 1e-9) {
            throw std::invalid_argument("NoisyGateSetModel: POVM element outside [0, I]");
        }
        for (const auto& [name, r] : g.ptm) {
            if (r.rows() != 4 || r.cols() != 4) {
                throw std::invalid_argument("NoisyGateSetModel: PTM must be 4x4");
            }
            if (std::abs(r(0, 0) - 1.0) > tp_tol || r.row(0).tail(3).cwiseAbs().maxCoeff() > tp_tol) {
                throw std::invalid_argument("NoisyGateSetModel: rotation " + name + " is not trace preserving");
            }
        }
    }
}

std::array<std::array<CMatrix, 4>, 3> NoisyGateSetModel::qubit_probes() const {
    std::array<std::array<CMatrix, 4>, 3> out;
    for (int q = 0; q < 3; ++q) {
        for (int i = 0; i < 4; ++i) {
            out[q][i] = qubits[q].apply(kPrepGates[i], qubits[q].rho0);
        }
    }
    return out;
}

std::array<std::array<CMatrix, 6>, 3> NoisyGateSetModel::qubit_effects() const {
    std::array<std::array<CMatrix, 6>, 3> out;
    for (int q = 0; q < 3; ++q) {
        const CMatrix m1 = CMatrix::Identity(2, 2) - qubits[q].m0;
        for (int j = 0; j < 3; ++j) {
            out[q][2 * j] = qubits[q].apply_adjoint(kMeasGates[j], qubits[q].m0);
            out[q][2 * j + 1] = qubits[q].apply_adjoint(kMeasGates[j], m1);
        }
    }
    return out;
}

std::vector<CMatrix> NoisyGateSetModel::probe_states() const {
    const auto p = qubit_probes();
    std::vector<CMatrix> out;
    out.reserve(64);
    for (int i = 0; i < 64; ++i) {
        out.push_back(kron({p[0][i / 16], p[1][(i / 4) % 4], p[2][i % 4]}));
    }
    return out;
}

std::vector<CMatrix> NoisyGateSetModel::effects() const {
    const auto e = qubit_effects();
    std::vector<CMatrix> out;
    out.reserve(27 * 8);
    for (int j = 0; j < 27; ++j) {
        const int j0 = j / 9, j1 = (j / 3) % 3, j2 = j % 3;
        for (int s = 0; s < 8; ++s) {
            const int s0 = s / 4, s1 = (s / 2) % 2, s2 = s % 2;
            out.push_back(kron({e[0][2 * j0 + s0], e[1][2 * j1 + s1], e[2][2 * j2 + s2]}));
        }
    }
    return out;
}

}  // namespace cczs
