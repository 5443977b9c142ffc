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

#ifndef CCZS_PROCESS_HPP
#define CCZS_PROCESS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "cczs/core.hpp"
#include "cczs/gates.hpp"
#include "cczs/gateset.hpp"

namespace cczs {

/// Three-qubit channel held as a Choi matrix
///   rho_Phi = sum_ij |i><j| (x) Phi(|i><j|),
/// input factor first, trace 8. Phi(rho) = Tr_in((rho^T (x) I) rho_Phi).
struct QuantumProcess {
    CMatrix choi = CMatrix::Zero(64, 64);
    HilbertDims dims{2, 2, 2};

    static constexpr int kDim = 8;

    /// Max deviation of Tr_out(choi) from I.
    double tp_error() const;
    double min_eigenvalue() const;
};

QuantumProcess choi_from_unitary(const CMatrix& u);
QuantumProcess choi_from_kraus(const std::vector<CMatrix>& kraus);
QuantumProcess choi_from_map(const std::function<CMatrix(const CMatrix&)>& channel);
CMatrix apply_choi(const QuantumProcess& p, const CMatrix& rho);

/// chi in the Pauli basis: Phi(rho) = sum_ab chi_ab P_a rho P_b, trace 1 for TP maps.
CMatrix to_chi(const QuantumProcess& p);
QuantumProcess from_chi(const CMatrix& chi);
/// R_ab = Tr(P_a Phi(P_b)) / 8.
RMatrix to_ptm(const QuantumProcess& p);
QuantumProcess from_ptm(const RMatrix& r);
/// K = sqrt(lambda) unvec(v) over Choi eigenpairs with lambda above tol.
std::vector<CMatrix> to_kraus(const QuantumProcess& p, double tol = 1e-12);

/// Uhlmann fidelity of two chi matrices, each normalized to unit trace first.
double process_fidelity(const CMatrix& chi_a, const CMatrix& chi_b);
/// Process fidelity to a unitary target: <<U| rho_Phi |U>> / d^2.
double process_fidelity(const QuantumProcess& p, const CMatrix& u);

/// Depolarizing and random-channel helpers for tests and simulations.
QuantumProcess depolarize(const QuantumProcess& p, double lambda);
QuantumProcess random_cptp(std::uint64_t seed, int kraus_rank = 4);

/// counts[(i * 27 + j) * 8 + s] for preparation i, basis j, outcome s.
struct TomographyDataset {
    int shots = 0;
    std::vector<std::int64_t> counts = std::vector<std::int64_t>(64 * 27 * 8, 0);

    std::int64_t& at(int i, int j, int s) { return counts[(i * 27 + j) * 8 + s]; }
    std::int64_t at(int i, int j, int s) const { return counts[(i * 27 + j) * 8 + s]; }
    void validate() const;
    std::vector<double> frequencies() const;
};

/// p[(i * 27 + j) * 8 + s] = Tr((rho_i^T (x) M_js) rho_Phi). Throws if any
/// setting's outcome probabilities do not sum to 1 within 1e-8.
std::vector<double> qpt_probabilities(const QuantumProcess& channel, const NoisyGateSetModel& gsm);

/// Multinomial sampling of qpt_probabilities with `shots` per setting.
TomographyDataset simulate_qpt_dataset(const QuantumProcess& channel, const NoisyGateSetModel& gsm, int shots,
                                       std::uint64_t seed);

/// The linear map vec(rho_Phi) -> probabilities, stored in factored form.
/// Writing rho_Phi = sum_ab c_ab P_a (x) P_b with real c, the probabilities
/// are P C Q^T with P_ia = Tr(rho_i^T P_a) (64 x 64) and Q_(js),b = Tr(M_js P_b)
/// (216 x 64). The full matrix is the Kronecker product of P and Q.
struct DesignMatrix {
    RMatrix p;
    RMatrix q;

    Eigen::Index rows() const { return p.rows() * q.rows(); }
    Eigen::Index cols() const { return p.cols() * q.cols(); }
    Eigen::Index rank(double tol = 1e-10) const;
    /// Probabilities for a Choi matrix, laid out as qpt_probabilities.
    std::vector<double> apply(const QuantumProcess& channel) const;
    /// One row of the full matrix acting on the Pauli coefficients c_ab (a*64+b).
    RVector row(int i, int j, int s) const;
};

DesignMatrix design_matrix(const NoisyGateSetModel& gsm);

struct ProjectionInfo {
    int iterations = 0;
    bool converged = false;
};

/// Nearest CPTP Choi matrix by Dykstra alternation between the trace-preserving
/// affine set and the PSD cone. Stops when successive iterates differ by less
/// than tol (Frobenius) or after max_iter iterations.
QuantumProcess project_cptp(const CMatrix& choi, ProjectionInfo* info = nullptr, double tol = 1e-10,
                            int max_iter = 10000);

struct Reconstruction {
    QuantumProcess process;
    QuantumProcess least_squares;  // before projection
    ProjectionInfo projection;
};

/// Least squares on the factored normal equations (ridge 1e-12 relative),
/// followed by CPTP projection.
Reconstruction pls_reconstruct(const std::vector<double>& frequencies, const NoisyGateSetModel& gsm);
Reconstruction pls_reconstruct(const TomographyDataset& data, const NoisyGateSetModel& gsm);
Reconstruction pls_reconstruct(const std::vector<double>& frequencies, const DesignMatrix& a);

struct BootstrapResult {
    std::vector<double> values;
    double mean = 0.0;
    double stdev = 0.0;
    double p025 = 0.0;
    double p975 = 0.0;
    int unconverged = 0;
};

/// Multinomial resampling of every setting with the dataset's shots, a full
/// reconstruction per replicate, and post(process) collected. Replicate r draws
/// from a stream seeded by split_seed(seed, r).
BootstrapResult bootstrap(const TomographyDataset& data, const NoisyGateSetModel& gsm, int n_boot, std::uint64_t seed,
                          const std::function<double(const QuantumProcess&)>& post, unsigned threads = 1);

struct ControlErrorFree {
    GateParams params;  // canonical
    double fidelity = 0.0;
    bool converged = false;
};

/// Maximize process_fidelity(p, build_cczs(angles)) over the three angles:
/// a 16^3 grid, then simplex refinement from the best grid point and from `start`.
ControlErrorFree control_error_free(const QuantumProcess& p, const GateParams& start);

struct LeadingKraus {
    CMatrix op;
    double weight = 0.0;  // largest Choi eigenvalue / d
    bool degenerate = false;
};

/// Kraus operator of the largest Choi eigenvalue with its largest-magnitude
/// entry made real positive.
LeadingKraus leading_kraus(const QuantumProcess& p);

struct PtmOverlap {
    RMatrix d;
    int significant = 0;  // entries with |D_ij| > threshold
    double max_abs = 0.0;
};

/// D = E_ideal^T E - I.
PtmOverlap ptm_overlap(const RMatrix& ideal, const RMatrix& e, double threshold = 1e-3);

}  // namespace cczs

#endif
