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

#ifndef CCZS_CIRCUITS_HPP
#define CCZS_CIRCUITS_HPP

#include <string>
#include <vector>

#include "cczs/core.hpp"
#include "cczs/gates.hpp"
#include "cczs/gateset.hpp"
#include "cczs/noise.hpp"

namespace cczs {

/// Per-coupler effective exchange |J| (rad/s) matching a 353 ns CZ.
inline constexpr double kDefaultCoupling = kPi * 2.833e6;

/// One gate application. Single-qubit names follow single_qubit_gate and take
/// params = {angle}. "CZ" takes two targets. "CCZS" takes targets {0, 1, 2}
/// and params = {theta, phi, gamma, fraction}: the drive for the full gate of
/// length duration / fraction, applied for `duration`.
struct GateOp {
    std::string name;
    std::vector<int> targets;
    std::vector<double> params;
    double duration = 0.0;  // seconds
};

struct Moment {
    std::vector<GateOp> ops;
    double duration() const;
};

struct Circuit {
    std::string label;
    std::vector<Moment> moments;

    /// Throws std::invalid_argument on repeated qubits within a moment,
    /// negative durations, bad targets or unknown gates.
    void validate() const;
};

struct CircuitTiming {
    double coupling = kDefaultCoupling;  // |J01| = |J02| in rad/s
    double single_qubit = 20e-9;
    double cz() const { return kPi / coupling; }
    double cczs() const;
};

/// Ry(pi/2) on Q0, X on Q1; CCZS(pi/2, 0, 0); X on Q1.
Circuit ghz_circuit(const CircuitTiming& timing = {});
/// Ry(2 arccos sqrt(1/3)) on Q0; X12 on Q0; sqrt CCZS; X on Q0.
Circuit w_circuit(const CircuitTiming& timing = {});
/// CZ + single-qubit decompositions on the Q1-Q0-Q2 line.
Circuit ghz_reference(const CircuitTiming& timing = {});
Circuit w_reference(const CircuitTiming& timing = {});

/// exp(-i H_eff tau / 2), tau = gate_time(d).
CMatrix sqrt_cczs(const DriveConfig& d);

/// Hermitian G on three qutrits with exp(-i G) equal to the gate's qutrit action.
CMatrix op_generator(const GateOp& op);
CMatrix op_unitary(const GateOp& op);

/// Executes on three qutrits. Without noise the embedded unitaries are
/// multiplied; with noise each moment is a master-equation segment of the
/// moment duration (shorter gates are stretched over it). Zero-duration
/// moments are applied instantaneously.
CMatrix run_circuit(const Circuit& c, const CMatrix& rho0_27, const DecoherenceRates* noise = nullptr);

struct DepthReport {
    int entangling_depth = 0;  // moments holding a CZ or CCZS
    int cz_depth = 0;          // moments holding a CZ
    int cczs_count = 0;
    double duration = 0.0;
};
DepthReport depth_report(const Circuit& c);

/// |000><000| on three qutrits.
CMatrix ground_state_27();
/// Product of the gate-set initial states, placed on the computational block.
CMatrix noisy_initial_state(const NoisyGateSetModel& gsm);

}  // namespace cczs

#endif
