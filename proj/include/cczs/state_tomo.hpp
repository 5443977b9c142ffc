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

#ifndef CCZS_STATE_TOMO_HPP
#define CCZS_STATE_TOMO_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "cczs/core.hpp"
#include "cczs/gateset.hpp"

namespace cczs {

/// Real parameters of a lower-triangular T with rho = T^dag T / Tr(T^dag T).
/// Layout for d = 2^n: the d real diagonal entries first, then for each
/// subdiagonal k = 1 .. d-1 the entries T(i+k, i) as (re, im) pairs.
DensityMatrix cholesky_to_rho(const RVector& t, int n_qubits = 3);

/// A parameter vector t with cholesky_to_rho(t) = rho. rho must be positive
/// definite; throws NumericalError otherwise.
RVector rho_to_cholesky(const CMatrix& rho);

/// Counts for the 27 Pauli bases x 8 outcomes, ordered as in
/// NoisyGateSetModel::effects (basis digits X=0, Y=1, Z=2, Q0 most significant).
struct StateDataset {
    int shots = 0;
    std::vector<std::int64_t> counts = std::vector<std::int64_t>(27 * 8, 0);

    std::int64_t& at(int j, int s) { return counts[j * 8 + s]; }
    std::int64_t at(int j, int s) const { return counts[j * 8 + s]; }
    void validate() const;
};

std::vector<double> state_probabilities(const CMatrix& rho, const std::vector<CMatrix>& effects);
StateDataset simulate_state_dataset(const CMatrix& rho, const std::vector<CMatrix>& effects, int shots,
                                    std::uint64_t seed);

/// Least-squares inversion of the frequencies followed by projection of the
/// spectrum onto the probability simplex.
CMatrix linear_inversion(const StateDataset& data, const std::vector<CMatrix>& effects);

/// Multinomial log-likelihood sum n log Tr(E rho).
double log_likelihood(const CMatrix& rho, const StateDataset& data, const std::vector<CMatrix>& effects);

struct MleResult {
    DensityMatrix rho;
    RVector t;
    double log_likelihood = 0.0;
    double gradient_norm = 0.0;  // of -log L / N with respect to t / |t|
    int iterations = 0;
    bool converged = false;
};

/// Objective -log L / N and its gradient with respect to t.
double mle_objective(const RVector& t, const StateDataset& data, const std::vector<CMatrix>& effects,
                     RVector* grad);

/// Maximum-likelihood estimate. Passing noisy effects (from a gate-set model)
/// mitigates measurement error.
MleResult mle_reconstruct(const StateDataset& data, const std::vector<CMatrix>& effects);

enum class StateFamily { Ghz, W };

/// (|000> + |111>)/sqrt2 or (|100> + |010> + |001>)/sqrt3.
CVector ideal_state(StateFamily family);

struct PhaseCorrectionResult {
    std::array<double, 3> angles{0.0, 0.0, 0.0};  // Rz angle per qubit
    CMatrix rho;
    double fidelity_before = 0.0;
    double fidelity_after = 0.0;
};

/// Local Rz rotations maximizing the overlap with the ideal state.
PhaseCorrectionResult phase_correction(const CMatrix& rho, StateFamily family);

/// Uhlmann fidelity (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.
double state_fidelity(const CMatrix& rho, const CMatrix& sigma);
/// <psi|rho|psi>.
double state_fidelity(const CMatrix& rho, const CVector& psi);

}  // namespace cczs

#endif
