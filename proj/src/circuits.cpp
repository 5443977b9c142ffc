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

#include "cczs/circuits.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace cczs {
namespace {

bool is_single(const std::string& n) {
    return n == "I" || n == "Rx" || n == "Ry" || n == "Rz" || n == "X" || n == "X12";
}

GateOp single(const std::string& name, int q, double angle, double duration) {
    return GateOp{name, {q}, {angle}, name == "Rz" ? 0.0 : duration};
}

// Embed a 3x3 (one qutrit) or 9x9 (two qutrits) operator on the listed qutrits.
CMatrix embed_local(const CMatrix& local, const std::vector<int>& targets) {
    const HilbertDims dims{3, 3, 3};
    CMatrix out = CMatrix::Zero(27, 27);
    for (int r = 0; r < 27; ++r) {
        const auto rd = dims.digits(r);
        for (int c = 0; c < 27; ++c) {
            const auto cd = dims.digits(c);
            bool spectator_match = true;
            int lr = 0, lc = 0;
            for (int q = 0; q < 3; ++q) {
                bool targeted = false;
                for (int t : targets) targeted = targeted || t == q;
                if (!targeted && rd[q] != cd[q]) spectator_match = false;
            }
            if (!spectator_match) continue;
            for (int t : targets) {
                lr = lr * 3 + rd[t];
                lc = lc * 3 + cd[t];
            }
            out(r, c) = local(lr, lc);
        }
    }
    return out;
}

}  // namespace

double Moment::duration() const {
    double d = 0.0;
    for (const auto& op : ops) d = std::max(d, op.duration);
    return d;
}

void Circuit::validate() const {
    for (const auto& m : moments) {
        std::set<int> used;
        for (const auto& op : m.ops) {
            if (op.duration < 0) {
                throw std::invalid_argument("circuit: negative duration");
            }
            for (int t : op.targets) {
                if (t < 0 || t > 2) {
                    throw std::invalid_argument("circuit: target out of range");
                }
                if (!used.insert(t).second) {
                    throw std::invalid_argument("circuit: qubit used twice in one moment");
                }
            }
            if (is_single(op.name)) {
                if (op.targets.size() != 1 || op.params.size() != 1) {
                    throw std::invalid_argument("circuit: single-qubit gate needs one target and one angle");
                }
            } else if (op.name == "CZ") {
                if (op.targets.size() != 2) {
                    throw std::invalid_argument("circuit: CZ needs two targets");
                }
            } else if (op.name == "CCZS") {
                if (op.targets != std::vector<int>{0, 1, 2} || op.params.size() != 4) {
                    throw std::invalid_argument("circuit: CCZS needs targets {0,1,2} and four params");
                }
            } else {
                throw std::invalid_argument("circuit: unknown gate " + op.name);
            }
        }
    }
}

double CircuitTiming::cczs() const {
    DriveConfig d;
    d.j01 = coupling;
    d.j02 = coupling;
    return gate_time(d);
}

Circuit ghz_circuit(const CircuitTiming& timing) {
    const double s = timing.single_qubit;
    Circuit c;
    c.label = "ghz";
    c.moments.push_back({{single("Ry", 0, kPi / 2, s), single("X", 1, kPi, s)}});
    c.moments.push_back({{GateOp{"CCZS", {0, 1, 2}, {kPi / 2, 0.0, 0.0, 1.0}, timing.cczs()}}});
    c.moments.push_back({{single("X", 1, kPi, s)}});
    return c;
}

Circuit w_circuit(const CircuitTiming& timing) {
    const double s = timing.single_qubit;
    Circuit c;
    c.label = "w";
    c.moments.push_back({{single("Ry", 0, 2 * std::acos(std::sqrt(1.0 / 3.0)), s)}});
    c.moments.push_back({{single("X12", 0, kPi, s)}});
    c.moments.push_back({{GateOp{"CCZS", {0, 1, 2}, {kPi / 2, 0.0, 0.0, 0.5}, 0.5 * timing.cczs()}}});
    c.moments.push_back({{single("X", 0, kPi, s)}});
    return c;
}

namespace {

// Ry(pi/2) . CZ . Ry(-pi/2) on the target gives CNOT.
void append_cnot(Circuit& c, int control, int target, const CircuitTiming& t) {
    c.moments.push_back({{single("Ry", target, -kPi / 2, t.single_qubit)}});
    c.moments.push_back({{GateOp{"CZ", {control, target}, {}, t.cz()}}});
    c.moments.push_back({{single("Ry", target, kPi / 2, t.single_qubit)}});
}

}  // namespace

Circuit ghz_reference(const CircuitTiming& timing) {
    Circuit c;
    c.label = "ghz_reference";
    c.moments.push_back({{single("Ry", 0, kPi / 2, timing.single_qubit)}});
    append_cnot(c, 0, 1, timing);
    append_cnot(c, 0, 2, timing);
    return c;
}

Circuit w_reference(const CircuitTiming& timing) {
    const double s = timing.single_qubit;
    Circuit c;
    c.label = "w_reference";
    c.moments.push_back({{single("Ry", 0, 2 * std::acos(std::sqrt(1.0 / 3.0)), s), single("Ry", 1, -kPi / 4, s)}});
    // Controlled Hadamard Q0 -> Q1.
    c.moments.push_back({{GateOp{"CZ", {0, 1}, {}, timing.cz()}}});
    c.moments.push_back({{single("Ry", 1, kPi / 4, s)}});
    append_cnot(c, 0, 2, timing);
    append_cnot(c, 1, 0, timing);
    c.moments.push_back({{single("X", 2, kPi, s)}});
    return c;
}

CMatrix sqrt_cczs(const DriveConfig& d) {
    return expm_hermitian(build_heff(d), gate_time(d) / 2);
}

CMatrix op_generator(const GateOp& op) {
    if (is_single(op.name)) {
        return embed_local(single_qubit_generator(op.name, op.params.at(0), 3), op.targets);
    }
    if (op.name == "CZ") {
        CMatrix g = CMatrix::Zero(9, 9);
        g(4, 4) = kPi;  // |11>
        return embed_local(g, op.targets);
    }
    if (op.name == "CCZS") {
        const GateParams p{op.params.at(0), op.params.at(1), op.params.at(2)};
        const double fraction = op.params.at(3);
        if (!(fraction > 0) || !(op.duration > 0)) {
            throw std::invalid_argument("op_generator: CCZS needs positive fraction and duration");
        }
        return build_heff(drives_for_angles(p, op.duration / fraction)) * op.duration;
    }
    throw std::invalid_argument("op_generator: unknown gate " + op.name);
}

CMatrix op_unitary(const GateOp& op) {
    return expm_hermitian(op_generator(op), 1.0);
}

CMatrix run_circuit(const Circuit& c, const CMatrix& rho0_27, const DecoherenceRates* noise) {
    c.validate();
    if (rho0_27.rows() != 27 || rho0_27.cols() != 27) {
        throw std::invalid_argument("run_circuit: expects a 27x27 density matrix");
    }
    CMatrix rho = rho0_27;
    std::vector<JumpOperator> jumps;
    if (noise != nullptr) {
        noise->validate();
        jumps = jump_operators(*noise, 3);
    }
    for (const auto& m : c.moments) {
        const double dur = m.duration();
        CMatrix g = CMatrix::Zero(27, 27);
        for (const auto& op : m.ops) {
            if (noise != nullptr && op.duration == 0.0) {
                const CMatrix u = op_unitary(op);
                rho = u * rho * u.adjoint();
            } else {
                g += op_generator(op);
            }
        }
        if (noise == nullptr || dur == 0.0) {
            const CMatrix u = expm_hermitian(g, 1.0);
            rho = u * rho * u.adjoint();
        } else {
            rho = lindblad_evolve(rho, g / dur, jumps, dur);
        }
    }
    return rho;
}

DepthReport depth_report(const Circuit& c) {
    DepthReport r;
    for (const auto& m : c.moments) {
        bool cz = false, entangling = false;
        for (const auto& op : m.ops) {
            if (op.name == "CZ") cz = entangling = true;
            if (op.name == "CCZS") {
                entangling = true;
                ++r.cczs_count;
            }
        }
        r.cz_depth += cz;
        r.entangling_depth += entangling;
        r.duration += m.duration();
    }
    return r;
}

CMatrix ground_state_27() {
    CMatrix rho = CMatrix::Zero(27, 27);
    rho(0, 0) = 1.0;
    return rho;
}

CMatrix noisy_initial_state(const NoisyGateSetModel& gsm) {
    const CMatrix rho8 =
        kron(std::vector<CMatrix>{gsm.qubits[0].rho0, gsm.qubits[1].rho0, gsm.qubits[2].rho0});
    return qubit_to_qutrit(rho8);
}

}  // namespace cczs
