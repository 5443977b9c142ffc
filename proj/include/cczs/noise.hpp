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

#ifndef CCZS_NOISE_HPP
#define CCZS_NOISE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cczs/core.hpp"
#include "cczs/gates.hpp"

namespace cczs {

/// Per-qubit relaxation and pure-dephasing rates in 1/s.
struct DecoherenceRates {
    std::array<double, 3> gamma1{0.0, 0.0, 0.0};
    std::array<double, 3> gamma_phi{0.0, 0.0, 0.0};

    double gamma2(int q) const { return gamma1[q] / 2 + gamma_phi[q]; }
    void validate() const;

    /// Gamma1 = 1/T1, Gamma_phi = 1/T2* - 1/(2 T1). Throws when Gamma_phi < 0.
    static DecoherenceRates from_times(const std::array<double, 3>& t1, const std::array<double, 3>& t2star);
    static DecoherenceRates zero() { return {}; }
};

struct JumpOperator {
    double rate = 0.0;
    CMatrix op;
    std::string label;
};

/// Effective three-qutrit Hamiltonian (Q0 most significant):
///   J01 (|110><200| + |111><201|) + J02 (|101><200| + |111><210|) + h.c.
///   + energies that reduce to delta (|200><200| - |111><111|) when delta1 == delta2.
CMatrix build_heff(const DriveConfig& d);

/// Per qubit: (Gamma1, L10), (2 Gamma1, L21), (Gamma_phi / 2, diag(0, 2, 4)),
/// each embedded on `n_qutrits` qutrits. Zero-rate operators are kept so the
/// count is always 3 per qutrit.
std::vector<JumpOperator> jump_operators(const DecoherenceRates& r, int n_qutrits = 3);

/// Integrates the master equation for a constant H over time t. The
/// coherent part is exact (eigenbasis interaction picture); the dissipator is
/// integrated with RK4. steps <= 0 chooses a step count from the spectral
/// width of H and the largest rate. Throws NumericalError on trace drift > 1e-8.
CMatrix lindblad_evolve(const CMatrix& rho0, const CMatrix& h, const std::vector<JumpOperator>& jumps, double t,
                        int steps = 0);
DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const CMatrix& h, const std::vector<JumpOperator>& jumps,
                              double t, int steps = 0);

struct PerturbativeResult {
    CMatrix rho0;
    CMatrix rho1;
};

/// First-order expansion of the master equation in the rates for a pure
/// initial state. rho1 uses composite Simpson quadrature with `panels` panels.
PerturbativeResult perturbative_evolve(const CVector& psi0, const CMatrix& h, const std::vector<JumpOperator>& jumps,
                                       double t, int panels = 400);

/// Channel on the three-qubit (8-dim) space.
using QubitChannel = std::function<CMatrix(const CMatrix&)>;

/// Single-qubit probe states used to build the operator basis.
enum class ProbeSet {
    ZeroOnePlusPlusI,   // {|0>, |1>, |+>, |+i>}: spans all 2x2 operators
    ZeroOnePlusMinus,   // {|0>, |1>, |+>, |->}: does not span sigma_y
};

/// F_av = (sum_jk alpha_jk Tr[U P_j^dag U^dag E(rho_k)] + d^2) / (d^2 (d+1)) with Pauli P_j and
/// product probe states rho_k. Throws std::domain_error if the probe set does
/// not span the operator space.
double average_gate_fidelity(const QubitChannel& channel, const CMatrix& u_ideal,
                             ProbeSet probes = ProbeSet::ZeroOnePlusPlusI);

/// Channel E(rho) = P (rho0 + rho1) P on computational inputs, evaluated with
/// perturbative_evolve. Inputs must be pure.
QubitChannel perturbative_channel(const CMatrix& h, const std::vector<JumpOperator>& jumps, double t,
                                  int panels = 400);
/// Same channel through lindblad_evolve (any input).
QubitChannel lindblad_channel(const CMatrix& h, const std::vector<JumpOperator>& jumps, double t);

/// How population left in |2> is mapped when building a qubit channel.
enum class LeakagePolicy {
    Discard,     // project onto the computational subspace (trace loss)
    FoldToOne,   // |2> -> |1> per qutrit; keeps the channel trace preserving
};

/// Choi matrix (input factor first, trace 8) of the qubit channel obtained by
/// lifting to qutrits, evolving under the master equation, and mapping back.
CMatrix qutrit_channel_choi(const CMatrix& h, const std::vector<JumpOperator>& jumps, double t,
                            LeakagePolicy policy);

/// Map a 27x27 qutrit density matrix to 8x8.
CMatrix qutrit_to_qubit(const CMatrix& rho27, LeakagePolicy policy);
/// Embed an 8x8 operator into the computational block of a 27x27 one.
CMatrix qubit_to_qutrit(const CMatrix& rho8);

struct CoherenceLimit {
    double f_av = 1.0;
    double f_chi = 1.0;
    bool small_rate_warning = false;  // some Gamma * tau > 0.1
};

/// First-order closed form for U_CCZS(pi/2, phi, 0) at duration tau.
CoherenceLimit coherence_limit(const DecoherenceRates& r, double tau);

/// Mean and standard deviation of each T1 / T2* (seconds).
struct CoherenceTimeDistribution {
    std::array<double, 3> t1_mean{}, t1_sd{};
    std::array<double, 3> t2star_mean{}, t2star_sd{};
};

struct MonteCarloLimit {
    std::vector<double> f_chi;  // per sample
    double lo = 0.0;            // 2.5th percentile
    double hi = 0.0;            // 97.5th percentile
    double point = 0.0;         // at the means
    std::uint64_t rejected = 0; // unphysical draws that were resampled
};

/// Independent Gaussian T1 and T2* per qubit; draws with T <= 0 or
/// Gamma_phi < 0 are redrawn. Sample i uses a stream seeded by split_seed(seed, i),
/// so results do not depend on the thread count.
MonteCarloLimit monte_carlo_limit(const CoherenceTimeDistribution& dist, double tau, int n, std::uint64_t seed,
                                  unsigned threads = 1);

/// Linear-interpolated percentile (q in [0, 100]) of unsorted data.
double percentile(std::vector<double> data, double q);

}  // namespace cczs

#endif
