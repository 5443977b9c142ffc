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

#include "cczs/state_tomo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cczs/gates.hpp"
#include "cczs/optimize.hpp"

namespace cczs {
namespace {

CMatrix triangular_from_params(const RVector& t, int d) {
    CMatrix tm = CMatrix::Zero(d, d);
    int pos = 0;
    for (int i = 0; i < d; ++i) {
        tm(i, i) = t(pos++);
    }
    for (int k = 1; k < d; ++k) {
        for (int i = 0; i + k < d; ++i) {
            tm(i + k, i) = Complex(t(pos), t(pos + 1));
            pos += 2;
        }
    }
    return tm;
}

RVector params_from_triangular(const CMatrix& tm) {
    const int d = static_cast<int>(tm.rows());
    RVector t(d * d);
    int pos = 0;
    for (int i = 0; i < d; ++i) {
        t(pos++) = tm(i, i).real();
    }
    for (int k = 1; k < d; ++k) {
        for (int i = 0; i + k < d; ++i) {
            t(pos++) = tm(i + k, i).real();
            t(pos++) = tm(i + k, i).imag();
        }
    }
    return t;
}

int dim_from_params(Eigen::Index size) {
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size))));
    if (d * d != size || d < 2) {
        throw std::invalid_argument("Cholesky parameters: length must be d^2");
    }
    return d;
}

RVector simplex_projection(const RVector& mu) {
    std::vector<double> s(mu.data(), mu.data() + mu.size());
    std::sort(s.begin(), s.end(), std::greater<>());
    double cum = 0.0;
    double shift = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        cum += s[k];
        const double cand = (cum - 1.0) / static_cast<double>(k + 1);
        if (s[k] - cand > 0) {
            shift = cand;
        }
    }
    return (mu.array() - shift).cwiseMax(0.0);
}

CMatrix rz_diagonal(const std::array<double, 3>& a) {
    CVector r(8);
    for (int k = 0; k < 8; ++k) {
        double ph = 0.0;
        for (int q = 0; q < 3; ++q) {
            const int bit = (k >> (2 - q)) & 1;
            ph += bit ? a[q] / 2 : -a[q] / 2;
        }
        r(k) = std::exp(kI * ph);
    }
    return r.asDiagonal();
}

}  // namespace

DensityMatrix cholesky_to_rho(const RVector& t, int n_qubits) {
    const int d = dim_from_params(t.size());
    if (d != (1 << n_qubits)) {
        throw std::invalid_argument("cholesky_to_rho: length does not match qubit count");
    }
    if (!t.allFinite()) {
        throw std::invalid_argument("cholesky_to_rho: non-finite parameters");
    }
    const double norm2 = t.squaredNorm();
    if (norm2 == 0.0) {
        throw std::invalid_argument("cholesky_to_rho: all-zero parameters");
    }
    const CMatrix tm = triangular_from_params(t, d);
    CMatrix rho = tm.adjoint() * tm / norm2;
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return DensityMatrix(rho, HilbertDims(std::vector<int>(n_qubits, 2)));
}

RVector rho_to_cholesky(const CMatrix& rho) {
    const Eigen::Index d = rho.rows();
    // rho = J L L^dag J with J the reversal; T = J L^dag J is lower triangular and T^dag T = rho.
    const CMatrix rev = rho.reverse();
    Eigen::LLT<CMatrix> llt(0.5 * (rev + rev.adjoint()));
    if (llt.info() != Eigen::Success) {
        throw NumericalError("rho_to_cholesky: matrix is not positive definite");
    }
    const CMatrix l = llt.matrixL();
    const CMatrix tm = CMatrix(l.adjoint()).reverse();
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(tm(i, i).real() > 0)) {
            throw NumericalError("rho_to_cholesky: singular factor");
        }
    }
    return params_from_triangular(tm);
}

void StateDataset::validate() const {
    if (shots <= 0) {
        throw std::invalid_argument("StateDataset: shots must be positive");
    }
    if (counts.size() != 27 * 8) {
        throw std::invalid_argument("StateDataset: expected 27 x 8 counts");
    }
    for (int j = 0; j < 27; ++j) {
        std::int64_t total = 0;
        for (int s = 0; s < 8; ++s) {
            if (at(j, s) < 0) {
                throw std::invalid_argument("StateDataset: negative count");
            }
            total += at(j, s);
        }
        if (total != shots) {
            throw std::invalid_argument("StateDataset: counts do not sum to shots");
        }
    }
}

std::vector<double> state_probabilities(const CMatrix& rho, const std::vector<CMatrix>& effects) {
    if (effects.size() != 27 * 8 || rho.rows() != 8) {
        throw std::invalid_argument("state_probabilities: expected 8x8 state and 216 effects");
    }
    std::vector<double> p(effects.size());
    for (std::size_t k = 0; k < effects.size(); ++k) {
        p[k] = (effects[k] * rho).trace().real();
    }
    return p;
}

StateDataset simulate_state_dataset(const CMatrix& rho, const std::vector<CMatrix>& effects, int shots,
                                    std::uint64_t seed) {
    if (shots <= 0) {
        throw std::invalid_argument("simulate_state_dataset: shots must be positive");
    }
    const auto p = state_probabilities(rho, effects);
    std::mt19937_64 rng(seed);
    StateDataset ds;
    ds.shots = shots;
    for (int j = 0; j < 27; ++j) {
        sample_multinomial(&p[j * 8], 8, shots, rng, &ds.counts[j * 8]);
    }
    return ds;
}

CMatrix linear_inversion(const StateDataset& data, const std::vector<CMatrix>& effects) {
    data.validate();
    RMatrix a(216, 64);
    RVector f(216);
    for (int k = 0; k < 216; ++k) {
        a.row(k) = pauli_coefficients(effects[k], 3).real().transpose() / 8.0;
        f(k) = static_cast<double>(data.counts[k]) / data.shots;
    }
    const RVector r = a.completeOrthogonalDecomposition().solve(f);
    CMatrix rho = from_pauli_coefficients(r.cast<Complex>(), 3) / 8.0;
    rho = 0.5 * (rho + rho.adjoint());
    const auto eig = hermitian_eig(rho, 1e-8);
    const RVector lam = simplex_projection(eig.values);
    return eig.vectors * lam.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

double log_likelihood(const CMatrix& rho, const StateDataset& data, const std::vector<CMatrix>& effects) {
    const auto p = state_probabilities(rho, effects);
    double ll = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (data.counts[k] > 0) {
            ll += static_cast<double>(data.counts[k]) * std::log(std::max(p[k], 1e-300));
        }
    }
    return ll;
}

double mle_objective(const RVector& t, const StateDataset& data, const std::vector<CMatrix>& effects,
                     RVector* grad) {
    const int d = dim_from_params(t.size());
    const CMatrix tm = triangular_from_params(t, d);
    const CMatrix a = tm.adjoint() * tm;
    const double tr = a.trace().real();
    const double n_total = 27.0 * data.shots;
    double value = 0.0;
    CMatrix weighted = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < effects.size(); ++k) {
        if (data.counts[k] == 0) {
            continue;
        }
        const double n = static_cast<double>(data.counts[k]);
        const double p = std::max((effects[k] * a).trace().real() / tr, 1e-300);
        value -= n * std::log(p);
        weighted += (n / p) * effects[k];
    }
    value /= n_total;
    if (grad != nullptr) {
        const CMatrix g = -(weighted - n_total * CMatrix::Identity(d, d)) / (n_total * tr);
        const CMatrix k = g * tm.adjoint();
        grad->resize(t.size());
        int pos = 0;
        for (int i = 0; i < d; ++i) {
            (*grad)(pos++) = 2 * k(i, i).real();
        }
        for (int off = 1; off < d; ++off) {
            for (int i = 0; i + off < d; ++i) {
                const Complex kv = k(i, i + off);
                (*grad)(pos++) = 2 * kv.real();
                (*grad)(pos++) = -2 * kv.imag();
            }
        }
    }
    return value;
}

MleResult mle_reconstruct(const StateDataset& data, const std::vector<CMatrix>& effects) {
    data.validate();
    if (effects.size() != 27 * 8) {
        throw std::invalid_argument("mle_reconstruct: expected 216 effects");
    }
    RVector t0;
    try {
        const CMatrix li = linear_inversion(data, effects);
        t0 = rho_to_cholesky(0.99 * li + 0.01 * CMatrix::Identity(8, 8) / 8.0);
    } catch (const NumericalError&) {
        t0 = rho_to_cholesky(CMatrix::Identity(8, 8) / 8.0);
    }
    t0 /= t0.norm();

    auto fg = [&](const std::vector<double>& x, std::vector<double>& g) {
        const RVector t = Eigen::Map<const RVector>(x.data(), static_cast<Eigen::Index>(x.size()));
        RVector gr;
        const double v = mle_objective(t, data, effects, &gr);
        g.assign(gr.data(), gr.data() + gr.size());
        return v;
    };
    std::vector<double> x(t0.data(), t0.data() + t0.size());
    MleResult out;
    RVector g;
    // Restarts refresh the inverse-Hessian estimate, which stalls on flat
    // directions of the scale-invariant objective.
    for (int pass = 0; pass < 4; ++pass) {
        const auto r = bfgs(fg, x, 5000, 1e-10, 1e-2);
        x = r.x;
        out.iterations += r.iterations;
        out.t = Eigen::Map<const RVector>(x.data(), static_cast<Eigen::Index>(x.size()));
        out.t /= out.t.norm();
        x.assign(out.t.data(), out.t.data() + out.t.size());
        mle_objective(out.t, data, effects, &g);
        if (g.norm() < 1e-8) {
            break;
        }
    }
    out.gradient_norm = g.norm();
    out.rho = cholesky_to_rho(out.t);
    out.log_likelihood = log_likelihood(out.rho.matrix, data, effects);
    out.converged = out.gradient_norm < 1e-6;
    return out;
}

CVector ideal_state(StateFamily family) {
    CVector psi = CVector::Zero(8);
    if (family == StateFamily::Ghz) {
        psi(0) = psi(7) = 1.0 / std::sqrt(2.0);
    } else {
        psi(4) = psi(2) = psi(1) = 1.0 / std::sqrt(3.0);
    }
    return psi;
}

PhaseCorrectionResult phase_correction(const CMatrix& rho, StateFamily family) {
    if (rho.rows() != 8 || rho.cols() != 8) {
        throw std::invalid_argument("phase_correction: expects an 8x8 density matrix");
    }
    const CVector psi = ideal_state(family);
    auto overlap = [&](const std::array<double, 3>& a) {
        const CVector w = rz_diagonal(a).adjoint() * psi;
        return (w.adjoint() * rho * w)(0, 0).real();
    };
    const int grid = 12;
    std::array<double, 3> best{0.0, 0.0, 0.0};
    double best_f = overlap(best);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            for (int k = 0; k < grid; ++k) {
                const std::array<double, 3> a{-kPi + 2 * kPi * i / grid, -kPi + 2 * kPi * j / grid,
                                              -kPi + 2 * kPi * k / grid};
                const double f = overlap(a);
                if (f > best_f) {
                    best_f = f;
                    best = a;
                }
            }
        }
    }
    auto objective = [&](const std::vector<double>& x) { return -overlap({x[0], x[1], x[2]}); };
    const auto r = nelder_mead(objective, {best[0], best[1], best[2]}, {0.1, 0.1, 0.1}, 10000, 1e-12, 1e-16, 200);
    PhaseCorrectionResult out;
    out.fidelity_before = state_fidelity(rho, psi);
    if (-r.value < best_f) {
        throw NumericalError("phase_correction: optimizer stagnated");
    }
    for (int q = 0; q < 3; ++q) {
        out.angles[q] = wrap_angle(r.x[q]);
    }
    const CMatrix rz = rz_diagonal(out.angles);
    out.rho = rz * rho * rz.adjoint();
    out.fidelity_after = state_fidelity(out.rho, psi);
    return out;
}

double state_fidelity(const CMatrix& rho, const CMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    }
    return uhlmann_fidelity(rho, sigma);
}

double state_fidelity(const CMatrix& rho, const CVector& psi) {
    return std::clamp((psi.adjoint() * rho * psi)(0, 0).real(), 0.0, 1.0);
}

}  // namespace cczs
