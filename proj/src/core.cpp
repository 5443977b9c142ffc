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

#include "cczs/core.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cczs {

HilbertDims::HilbertDims(std::initializer_list<int> d) : HilbertDims(std::vector<int>(d)) {}

HilbertDims::HilbertDims(std::vector<int> d) : dims(std::move(d)) {
    if (dims.empty()) {
        throw std::invalid_argument("HilbertDims: empty");
    }
    for (int x : dims) {
        if (x < 2) {
            throw std::invalid_argument("HilbertDims: subsystem dimension < 2");
        }
    }
}

int HilbertDims::total() const {
    int t = 1;
    for (int x : dims) {
        t *= x;
    }
    return t;
}

int HilbertDims::index(const std::vector<int>& digits) const {
    if (digits.size() != dims.size()) {
        throw std::invalid_argument("HilbertDims::index: digit count mismatch");
    }
    int idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (digits[k] < 0 || digits[k] >= dims[k]) {
            throw std::out_of_range("HilbertDims::index: digit out of range");
        }
        idx = idx * dims[k] + digits[k];
    }
    return idx;
}

std::vector<int> HilbertDims::digits(int index) const {
    std::vector<int> out(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

DensityMatrix::DensityMatrix(CMatrix m, HilbertDims d) : matrix(std::move(m)), dims(std::move(d)) {
    if (matrix.rows() != dims.total() || matrix.cols() != dims.total()) {
        throw std::invalid_argument("DensityMatrix: matrix size does not match dims");
    }
}

void DensityMatrix::validate(double tol) const {
    if (!is_hermitian(matrix, tol)) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(matrix.trace() - 1.0) > tol) {
        throw std::invalid_argument("DensityMatrix: trace != 1");
    }
    const auto eig = hermitian_eig(matrix, tol);
    if (eig.values.minCoeff() < -tol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const CVector& psi, HilbertDims d) {
    return DensityMatrix(psi * psi.adjoint(), std::move(d));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix kron(const std::vector<CMatrix>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("kron: empty factor list");
    }
    CMatrix out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        out = kron(out, factors[k]);
    }
    return out;
}

CMatrix partial_trace(const CMatrix& rho, const HilbertDims& dims, std::vector<int> keep) {
    const int n = static_cast<int>(dims.size());
    if (rho.rows() != dims.total() || rho.cols() != dims.total()) {
        throw std::invalid_argument("partial_trace: matrix size does not match dims");
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (int k : keep) {
        if (k < 0 || k >= n) {
            throw std::out_of_range("partial_trace: subsystem index out of range");
        }
    }
    std::vector<int> stride(n, 1);
    for (int k = n - 2; k >= 0; --k) {
        stride[k] = stride[k + 1] * dims[k + 1];
    }
    std::vector<int> traced;
    for (int k = 0; k < n; ++k) {
        if (!std::binary_search(keep.begin(), keep.end(), k)) {
            traced.push_back(k);
        }
    }
    // Offsets into the full index for every kept / traced digit combination.
    auto offsets = [&](const std::vector<int>& subs) {
        std::vector<int> off{0};
        for (int k : subs) {
            std::vector<int> next;
            next.reserve(off.size() * dims[k]);
            for (int base : off) {
                for (int d = 0; d < dims[k]; ++d) {
                    next.push_back(base + d * stride[k]);
                }
            }
            off = std::move(next);
        }
        return off;
    };
    const std::vector<int> ko = offsets(keep);
    const std::vector<int> to = offsets(traced);
    const int dk = static_cast<int>(ko.size());
    CMatrix out = CMatrix::Zero(dk, dk);
    for (int c = 0; c < dk; ++c) {
        for (int r = 0; r < dk; ++r) {
            Complex acc{0.0, 0.0};
            for (int t : to) {
                acc += rho(ko[r] + t, ko[c] + t);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) {
        throw std::invalid_argument("partial_trace: keep set must be non-empty");
    }
    CMatrix m = partial_trace(rho.matrix, rho.dims, sorted);
    std::vector<int> d;
    for (int k : sorted) {
        d.push_back(rho.dims[k]);
    }
    return DensityMatrix(std::move(m), HilbertDims(std::move(d)));
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const double scale = std::max(1.0, m.norm());
    return (m - m.adjoint()).norm() <= tol * scale;
}

EigenDecomposition hermitian_eig(const CMatrix& m, double tol) {
    if (!is_hermitian(m, tol)) {
        throw std::invalid_argument("hermitian_eig: input is not Hermitian");
    }
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eig: eigensolver failed");
    }
    EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
        Eigen::Index best = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&best);
        const Complex pivot = out.vectors(best, j);
        if (std::abs(pivot) > 0.0) {
            out.vectors.col(j) *= std::conj(pivot) / std::abs(pivot);
        }
    }
    return out;
}

CMatrix psd_sqrt(const CMatrix& m, double tol) {
    const auto eig = hermitian_eig(m);
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    RVector s(eig.values.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double lam = eig.values(i);
        if (lam < -tol * scale) {
            throw NumericalError("psd_sqrt: input has a negative eigenvalue");
        }
        s(i) = std::sqrt(std::max(0.0, lam));
    }
    return eig.vectors * s.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

namespace {

EigenDecomposition clipped_eig(const CMatrix& m, double tol) {
    auto e = hermitian_eig(0.5 * (m + m.adjoint()));
    const double top = std::max(e.values.cwiseAbs().maxCoeff(), 1e-300);
    if (e.values(0) < -tol * top) {
        throw NumericalError("uhlmann_fidelity: input is not positive semidefinite");
    }
    for (auto& v : e.values) {
        v = v < 1e-14 * top ? 0.0 : v;
    }
    return e;
}

}  // namespace

double uhlmann_fidelity(const CMatrix& a, const CMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    }
    const auto eb = clipped_eig(b, tol);
    const CMatrix sb = eb.vectors * eb.values.cwiseSqrt().cast<Complex>().asDiagonal() * eb.vectors.adjoint();
    const double f = clipped_eig(sb * a * sb, tol).values.cwiseSqrt().sum();
    return std::clamp(f * f, 0.0, 1.0);
}

CMatrix expm_hermitian(const CMatrix& h, double t) {
    const auto eig = hermitian_eig(h);
    CVector ph(eig.values.size());
    for (Eigen::Index k = 0; k < ph.size(); ++k) {
        ph(k) = std::exp(-kI * eig.values(k) * t);
    }
    return eig.vectors * ph.asDiagonal() * eig.vectors.adjoint();
}

CVector vec(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw std::invalid_argument("unvec: length does not match rows*cols");
    }
    return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

double unitarity_error(const CMatrix& u) {
    return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).norm();
}

CMatrix pauli(int index) {
    CMatrix p(2, 2);
    switch (index) {
        case 0:
            p << 1, 0, 0, 1;
            break;
        case 1:
            p << 0, 1, 1, 0;
            break;
        case 2:
            p << 0, -kI, kI, 0;
            break;
        case 3:
            p << 1, 0, 0, -1;
            break;
        default:
            throw std::out_of_range("pauli: index must be 0..3");
    }
    return p;
}

CMatrix pauli_string(int index, int n_qubits) {
    std::vector<CMatrix> f(n_qubits);
    for (int q = n_qubits - 1; q >= 0; --q) {
        f[q] = pauli(index % 4);
        index /= 4;
    }
    return kron(f);
}

namespace {

// Row r of Pauli string `index` has its single nonzero at column r ^ xmask.
struct PauliMasks {
    int xmask = 0;
    int zmask = 0;
    int ny = 0;
};

PauliMasks pauli_masks(int index, int n) {
    PauliMasks m;
    for (int q = n - 1; q >= 0; --q) {
        const int d = index % 4;
        index /= 4;
        const int bit = 1 << (n - 1 - q);
        if (d == 1 || d == 2) m.xmask |= bit;
        if (d == 2 || d == 3) m.zmask |= bit;
        if (d == 2) ++m.ny;
    }
    return m;
}

// P(r, r ^ xmask) = (-i)^ny (-1)^popcount(r & zmask), since per qubit
// Y(b, 1-b) = -i (-1)^b and Z(b, b) = (-1)^b.
Complex pauli_entry(const PauliMasks& m, int r) {
    static const Complex pow_mi[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const int sign = __builtin_popcount(static_cast<unsigned>(r & m.zmask)) & 1;
    const Complex base = pow_mi[m.ny % 4];
    return sign ? -base : base;
}

}  // namespace

CVector pauli_coefficients(const CMatrix& m, int n_qubits) {
    const int d = 1 << n_qubits;
    if (m.rows() != d || m.cols() != d) {
        throw std::invalid_argument("pauli_coefficients: dimension mismatch");
    }
    const int count = 1 << (2 * n_qubits);
    CVector c(count);
    for (int a = 0; a < count; ++a) {
        const PauliMasks pm = pauli_masks(a, n_qubits);
        Complex acc{0.0, 0.0};
        for (int r = 0; r < d; ++r) {
            acc += pauli_entry(pm, r) * m(r ^ pm.xmask, r);
        }
        c(a) = acc;
    }
    return c;
}

CMatrix from_pauli_coefficients(const CVector& c, int n_qubits) {
    const int d = 1 << n_qubits;
    const int count = 1 << (2 * n_qubits);
    if (c.size() != count) {
        throw std::invalid_argument("from_pauli_coefficients: length mismatch");
    }
    CMatrix m = CMatrix::Zero(d, d);
    for (int a = 0; a < count; ++a) {
        if (c(a) == Complex(0.0, 0.0)) {
            continue;
        }
        const PauliMasks pm = pauli_masks(a, n_qubits);
        for (int r = 0; r < d; ++r) {
            m(r, r ^ pm.xmask) += c(a) * pauli_entry(pm, r);
        }
    }
    return m;
}

void sample_multinomial(const double* probs, int k, int n, std::mt19937_64& rng, std::int64_t* out) {
    int remaining = n;
    double mass = 0.0;
    for (int s = 0; s < k; ++s) {
        mass += std::max(0.0, probs[s]);
    }
    for (int s = 0; s < k - 1; ++s) {
        const double ps = std::max(0.0, probs[s]);
        int draw = 0;
        if (remaining > 0 && mass > 0) {
            std::binomial_distribution<int> bin(remaining, std::clamp(ps / mass, 0.0, 1.0));
            draw = bin(rng);
        }
        out[s] = draw;
        remaining -= draw;
        mass -= ps;
    }
    out[k - 1] = remaining;
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    // SplitMix64 finalizer over a combined key.
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

CMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            g(i, j) = Complex(n(rng), n(rng));
        }
    }
    return g;
}

}  // namespace

CMatrix random_unitary(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const CMatrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const Complex rjj = r(j, j);
        q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
}

CMatrix random_density(int d, std::uint64_t seed, int rank) {
    std::mt19937_64 rng(seed);
    const CMatrix g = ginibre(d, rank > 0 ? rank : d, rng);
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

CMatrix random_hermitian(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const CMatrix g = ginibre(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

}  // namespace cczs
