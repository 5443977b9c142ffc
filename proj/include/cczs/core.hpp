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

#ifndef CCZS_CORE_HPP
#define CCZS_CORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cczs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Raised when a computation fails to converge or meets non-physical input
/// that is not a caller mistake. The CLI maps it to exit code 1.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Ordered subsystem dimensions. Subsystem 0 is the most significant tensor
/// factor, so |q0 q1 q2> has flat index (q0*d1 + q1)*d2 + q2.
struct HilbertDims {
    std::vector<int> dims;

    HilbertDims() = default;
    HilbertDims(std::initializer_list<int> d);
    explicit HilbertDims(std::vector<int> d);

    int total() const;
    std::size_t size() const { return dims.size(); }
    int operator[](std::size_t i) const { return dims[i]; }
    bool operator==(const HilbertDims& other) const = default;

    /// Flat index of a digit tuple, most significant digit first.
    int index(const std::vector<int>& digits) const;
    std::vector<int> digits(int index) const;
};

struct DensityMatrix {
    CMatrix matrix;
    HilbertDims dims;

    DensityMatrix() = default;
    DensityMatrix(CMatrix m, HilbertDims d);

    /// Throws std::invalid_argument unless Hermitian, unit trace and PSD within tol.
    void validate(double tol = 1e-8) const;
    static DensityMatrix pure(const CVector& psi, HilbertDims d);
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
/// Leftmost factor is the most significant subsystem.
CMatrix kron(const std::vector<CMatrix>& factors);

/// Trace out every subsystem not listed in keep. The kept subsystems stay in
/// their original order.
CMatrix partial_trace(const CMatrix& rho, const HilbertDims& dims, std::vector<int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

struct EigenDecomposition {
    RVector values;   // ascending
    CMatrix vectors;  // columns, each phase-fixed so its largest entry is real positive
};

/// Rejects inputs whose anti-Hermitian part exceeds tol (Frobenius, relative
/// to max(1, |M|)). The Hermitian part is decomposed.
EigenDecomposition hermitian_eig(const CMatrix& m, double tol = 1e-9);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol*scale, 0) are
/// clipped; anything more negative throws NumericalError.
CMatrix psd_sqrt(const CMatrix& m, double tol = 1e-10);

/// (Tr sqrt(sqrt(b) a sqrt(b)))^2 for PSD a, b, clamped to [0, 1]. Eigenvalues
/// below 1e-14 of the largest are treated as zero before each root; inputs
/// with an eigenvalue below -tol times the largest throw NumericalError.
double uhlmann_fidelity(const CMatrix& a, const CMatrix& b, double tol = 1e-8);

/// exp(-i H t) for Hermitian H.
CMatrix expm_hermitian(const CMatrix& h, double t);

/// Column-stacking vectorization: vec([[a,b],[c,d]]) = (a,c,b,d).
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol = 1e-9);
double unitarity_error(const CMatrix& u);
bool is_hermitian(const CMatrix& m, double tol = 1e-9);

/// Single-qubit Pauli in order I, X, Y, Z.
CMatrix pauli(int index);
/// n-qubit Pauli with per-qubit digits in base 4, qubit 0 most significant.
CMatrix pauli_string(int index, int n_qubits);

/// c_a = Tr(P_a M) for every n-qubit Pauli string P_a (index order as in
/// pauli_string). O(4^n 2^n).
CVector pauli_coefficients(const CMatrix& m, int n_qubits);
/// sum_a c_a P_a.
CMatrix from_pauli_coefficients(const CVector& c, int n_qubits);

/// Deterministic child seed for task `index` derived from `master`.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

CMatrix random_unitary(int d, std::uint64_t seed);
CMatrix random_density(int d, std::uint64_t seed, int rank = -1);
CMatrix random_hermitian(int d, std::uint64_t seed);

/// Multinomial draw of n trials over k outcomes by chained binomials.
/// Negative probabilities are treated as zero.
void sample_multinomial(const double* probs, int k, int n, std::mt19937_64& rng, std::int64_t* out);

}  // namespace cczs

#endif
