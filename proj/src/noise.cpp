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

#include "cczs/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cczs/kernels.hpp"
#include "cczs/parallel.hpp"

namespace cczs {

void DecoherenceRates::validate() const {
    for (int q = 0; q < 3; ++q) {
        if (!(gamma1[q] >= 0) || !(gamma_phi[q] >= 0)) {
            throw std::invalid_argument("DecoherenceRates: rates must be non-negative");
        }
    }
}

DecoherenceRates DecoherenceRates::from_times(const std::array<double, 3>& t1, const std::array<double, 3>& t2star) {
    DecoherenceRates r;
    for (int q = 0; q < 3; ++q) {
        if (!(t1[q] > 0) || !(t2star[q] > 0)) {
            throw std::invalid_argument("DecoherenceRates: T1 and T2* must be positive");
        }
        r.gamma1[q] = 1.0 / t1[q];
        r.gamma_phi[q] = 1.0 / t2star[q] - 0.5 / t1[q];
        if (r.gamma_phi[q] < 0) {
            throw std::invalid_argument("DecoherenceRates: T2* > 2 T1 gives negative pure dephasing");
        }
    }
    return r;
}

CMatrix build_heff(const DriveConfig& d) {
    const HilbertDims dims{3, 3, 3};
    auto idx = [&](int a, int b, int c) { return dims.index({a, b, c}); };
    CMatrix h = CMatrix::Zero(27, 27);
    auto couple = [&](int to, int from, Complex j) {
        h(to, from) += j;
        h(from, to) += std::conj(j);
    };
    couple(idx(1, 1, 0), idx(2, 0, 0), d.j01);
    couple(idx(1, 1, 1), idx(2, 0, 1), d.j01);
    couple(idx(1, 0, 1), idx(2, 0, 0), d.j02);
    couple(idx(1, 1, 1), idx(2, 1, 0), d.j02);
    const double s = 0.5 * (d.delta1 + d.delta2);
    const double a = 0.5 * (d.delta1 - d.delta2);
    h(idx(2, 0, 0), idx(2, 0, 0)) += s;
    h(idx(1, 1, 0), idx(1, 1, 0)) += -a;
    h(idx(1, 0, 1), idx(1, 0, 1)) += a;
    h(idx(1, 1, 1), idx(1, 1, 1)) += -s;
    h(idx(2, 0, 1), idx(2, 0, 1)) += a;
    h(idx(2, 1, 0), idx(2, 1, 0)) += -a;
    return h;
}

namespace {

CMatrix embed_single(const CMatrix& op, int qutrit, int n) {
    std::vector<CMatrix> f(n, CMatrix::Identity(3, 3));
    f[qutrit] = op;
    return kron(f);
}

struct Triplet {
    int row;
    int col;
    Complex value;
};

// Sparse form of the dissipator sum_k g_k (L rho L^dag - {L^dag L, rho}/2).
struct Dissipator {
    int dim = 0;
    std::vector<std::pair<double, std::vector<Triplet>>> terms;
    CMatrix anti;  // sum_k g_k L^dag L / 2
    bool anti_diagonal = true;
    double max_rate = 0.0;

    Dissipator(const std::vector<JumpOperator>& jumps, int d) : dim(d), anti(CMatrix::Zero(d, d)) {
        for (const auto& j : jumps) {
            if (j.op.rows() != d || j.op.cols() != d) {
                throw std::invalid_argument("jump operator dimension does not match the Hamiltonian");
            }
            if (j.rate < 0) {
                throw std::invalid_argument("jump operator rate must be non-negative");
            }
            if (j.rate == 0) {
                continue;
            }
            std::vector<Triplet> nz;
            for (int c = 0; c < d; ++c) {
                for (int r = 0; r < d; ++r) {
                    if (j.op(r, c) != Complex(0.0, 0.0)) {
                        nz.push_back({r, c, j.op(r, c)});
                    }
                }
            }
            anti += 0.5 * j.rate * j.op.adjoint() * j.op;
            max_rate = std::max(max_rate, j.rate * j.op.cwiseAbs2().colwise().sum().maxCoeff());
            terms.emplace_back(j.rate, std::move(nz));
        }
        anti_diagonal = (anti - CMatrix(anti.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
    }

    bool empty() const { return terms.empty(); }

    CMatrix apply(const CMatrix& rho) const {
        CMatrix out = CMatrix::Zero(dim, dim);
        for (const auto& [rate, nz] : terms) {
            for (const auto& a : nz) {
                for (const auto& b : nz) {
                    out(a.row, b.row) += rate * a.value * rho(a.col, b.col) * std::conj(b.value);
                }
            }
        }
        if (anti_diagonal) {
            for (int c = 0; c < dim; ++c) {
                for (int r = 0; r < dim; ++r) {
                    out(r, c) -= (anti(r, r) + anti(c, c)) * rho(r, c);
                }
            }
        } else {
            out -= anti * rho + rho * anti;
        }
        return out;
    }

    // Pure-state pieces: sum_k g_k |L psi><L psi| is returned as vectors
    // sqrt(g_k) L psi, and b = 2 * anti * psi.
    void pure_parts(const CVector& psi, std::vector<CVector>& a, CVector& b) const {
        a.clear();
        for (const auto& [rate, nz] : terms) {
            CVector v = CVector::Zero(dim);
            for (const auto& t : nz) {
                v(t.row) += t.value * psi(t.col);
            }
            a.push_back(std::sqrt(rate) * v);
        }
        b = 2.0 * anti * psi;
    }
};

CMatrix gemm(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows(), b.cols());
    kernels::active().cgemm(a.rows(), b.cols(), a.cols(), a.data(), a.rows(), b.data(), b.rows(), c.data(), c.rows());
    return c;
}

void axpy(Complex alpha, const CMatrix& x, CMatrix& y) {
    kernels::active().caxpy(static_cast<std::size_t>(x.size()), alpha, x.data(), y.data());
}

// Phases Phi_ab(t) = exp(-i (lambda_a - lambda_b) t).
CMatrix phase_matrix(const RVector& lambda, double t) {
    const Eigen::Index d = lambda.size();
    CVector e(d);
    for (Eigen::Index a = 0; a < d; ++a) {
        e(a) = std::exp(-kI * lambda(a) * t);
    }
    return e * e.adjoint();
}

CMatrix hadamard(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows(), a.cols());
    kernels::active().cmul(static_cast<std::size_t>(a.size()), a.data(), b.data(), out.data());
    return out;
}

}  // namespace

std::vector<JumpOperator> jump_operators(const DecoherenceRates& r, int n_qutrits) {
    if (n_qutrits < 1 || n_qutrits > 3) {
        throw std::invalid_argument("jump_operators: 1 to 3 qutrits supported");
    }
    r.validate();
    CMatrix l10 = CMatrix::Zero(3, 3);
    l10(0, 1) = 1.0;
    CMatrix l21 = CMatrix::Zero(3, 3);
    l21(1, 2) = 1.0;
    CMatrix lphi = CMatrix::Zero(3, 3);
    lphi(1, 1) = 2.0;
    lphi(2, 2) = 4.0;
    std::vector<JumpOperator> out;
    for (int q = 0; q < n_qutrits; ++q) {
        const std::string tag = "[q" + std::to_string(q) + "]";
        out.push_back({r.gamma1[q], embed_single(l10, q, n_qutrits), "L10" + tag});
        out.push_back({2 * r.gamma1[q], embed_single(l21, q, n_qutrits), "L21" + tag});
        out.push_back({0.5 * r.gamma_phi[q], embed_single(lphi, q, n_qutrits), "Lphi" + tag});
    }
    return out;
}

CMatrix lindblad_evolve(const CMatrix& rho0, const CMatrix& h, const std::vector<JumpOperator>& jumps, double t,
                        int steps) {
    const int d = static_cast<int>(h.rows());
    if (h.cols() != d || rho0.rows() != d || rho0.cols() != d) {
        throw std::invalid_argument("lindblad_evolve: dimension mismatch");
    }
    if (t < 0) {
        throw std::invalid_argument("lindblad_evolve: negative time");
    }
    const auto eig = hermitian_eig(h);
    const CMatrix& v = eig.vectors;
    const CMatrix vh = v.adjoint();
    const Dissipator diss(jumps, d);
    const Complex tr0 = rho0.trace();

    CMatrix y = gemm(gemm(vh, rho0), v);
    if (!diss.empty() && t > 0) {
        if (steps <= 0) {
            const double width = eig.values.maxCoeff() - eig.values.minCoeff();
            steps = static_cast<int>(std::ceil(std::max(width * t / 0.25, diss.max_rate * t / 0.01)));
            steps = std::max(steps, 4);
        }
        const double dt = t / steps;
        auto rhs = [&](double time, const CMatrix& yy) {
            const CMatrix ph = phase_matrix(eig.values, time);
            const CMatrix rho = gemm(gemm(v, hadamard(ph, yy)), vh);
            const CMatrix drho = gemm(gemm(vh, diss.apply(rho)), v);
            return CMatrix(hadamard(ph.conjugate(), drho));
        };
        for (int s = 0; s < steps; ++s) {
            const double t0 = s * dt;
            const CMatrix k1 = rhs(t0, y);
            CMatrix tmp = y;
            axpy(0.5 * dt, k1, tmp);
            const CMatrix k2 = rhs(t0 + 0.5 * dt, tmp);
            tmp = y;
            axpy(0.5 * dt, k2, tmp);
            const CMatrix k3 = rhs(t0 + 0.5 * dt, tmp);
            tmp = y;
            axpy(dt, k3, tmp);
            const CMatrix k4 = rhs(t0 + dt, tmp);
            axpy(dt / 6, k1, y);
            axpy(dt / 3, k2, y);
            axpy(dt / 3, k3, y);
            axpy(dt / 6, k4, y);
        }
    }
    CMatrix rho = gemm(gemm(v, hadamard(phase_matrix(eig.values, t), y)), vh);
    if (std::abs(rho.trace() - tr0) > 1e-8 * std::max(1.0, std::abs(tr0))) {
        throw NumericalError("lindblad_evolve: trace drift exceeds tolerance");
    }
    return rho;
}

DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const CMatrix& h, const std::vector<JumpOperator>& jumps,
                              double t, int steps) {
    return DensityMatrix(lindblad_evolve(rho0.matrix, h, jumps, t, steps), rho0.dims);
}

PerturbativeResult perturbative_evolve(const CVector& psi0, const CMatrix& h, const std::vector<JumpOperator>& jumps,
                                       double t, int panels) {
    const int d = static_cast<int>(h.rows());
    if (psi0.size() != d) {
        throw std::invalid_argument("perturbative_evolve: dimension mismatch");
    }
    if (panels < 2 || panels % 2 != 0) {
        throw std::invalid_argument("perturbative_evolve: panels must be even and >= 2");
    }
    const auto eig = hermitian_eig(h);
    const CMatrix& v = eig.vectors;
    const CMatrix vh = v.adjoint();
    const auto& kern = kernels::active();

    auto phases = [&](double time) {
        CVector e(d);
        for (int a = 0; a < d; ++a) {
            e(a) = std::exp(-kI * eig.values(a) * time);
        }
        return e;
    };
    // exp(-iH s) x through the eigenbasis.
    auto evolve = [&](const CVector& x, double s) {
        const CVector xe = vh * x;
        const CVector ph = phases(s);
        CVector ye(d);
        kern.cmul(static_cast<std::size_t>(d), ph.data(), xe.data(), ye.data());
        return CVector(v * ye);
    };

    const CVector psi_t = evolve(psi0, t);
    PerturbativeResult out;
    out.rho0 = psi_t * psi_t.adjoint();
    out.rho1 = CMatrix::Zero(d, d);
    const Dissipator diss(jumps, d);
    if (diss.empty() || t == 0.0) {
        return out;
    }
    const double hstep = t / panels;
    std::vector<CVector> a;
    CVector b;
    for (int n = 0; n <= panels; ++n) {
        const double s = n * hstep;
        const double w = (n == 0 || n == panels) ? 1.0 : (n % 2 == 1 ? 4.0 : 2.0);
        const CVector psi_s = evolve(psi0, s);
        diss.pure_parts(psi_s, a, b);
        const double weight = w * hstep / 3.0;
        for (const auto& ak : a) {
            const CVector c = evolve(ak, t - s);
            out.rho1.noalias() += weight * (c * c.adjoint());
        }
        const CVector cb = evolve(b, t - s);
        out.rho1.noalias() -= 0.5 * weight * (cb * psi_t.adjoint() + psi_t * cb.adjoint());
    }
    return out;
}

namespace {

std::array<CMatrix, 4> probe_states(ProbeSet probes) {
    CVector zero(2), one(2), plus(2), other(2);
    zero << 1, 0;
    one << 0, 1;
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    if (probes == ProbeSet::ZeroOnePlusPlusI) {
        other << 1 / std::sqrt(2.0), kI / std::sqrt(2.0);
    } else {
        other << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    }
    return {zero * zero.adjoint(), one * one.adjoint(), plus * plus.adjoint(), other * other.adjoint()};
}

}  // namespace

double average_gate_fidelity(const QubitChannel& channel, const CMatrix& u_ideal, ProbeSet probes) {
    const int d = 8;
    if (u_ideal.rows() != d || u_ideal.cols() != d) {
        throw std::invalid_argument("average_gate_fidelity: expects an 8x8 ideal unitary");
    }
    const auto rho1q = probe_states(probes);
    // Single-qubit change of basis: pauli(j) = sum_k alpha(j, k) rho_k.
    CMatrix r(4, 4);
    CMatrix p(4, 4);
    for (int k = 0; k < 4; ++k) {
        r.col(k) = vec(rho1q[k]);
        p.col(k) = vec(pauli(k));
    }
    Eigen::FullPivLU<CMatrix> lu(r);
    if (lu.rank() < 4) {
        throw std::domain_error("average_gate_fidelity: probe states do not span the operator space");
    }
    const CMatrix alpha1 = lu.solve(p).transpose();
    const CMatrix alpha = kron({alpha1, alpha1, alpha1});

    std::vector<CMatrix> outputs(64);
    for (int k = 0; k < 64; ++k) {
        outputs[k] = channel(kron({rho1q[k / 16], rho1q[(k / 4) % 4], rho1q[k % 4]}));
    }
    Complex total{0.0, 0.0};
    for (int j = 0; j < 64; ++j) {
        const CMatrix m = u_ideal * pauli_string(j, 3).adjoint() * u_ideal.adjoint();
        for (int k = 0; k < 64; ++k) {
            if (std::abs(alpha(j, k)) < 1e-15) {
                continue;
            }
            total += alpha(j, k) * (m * outputs[k]).trace();
        }
    }
    return (total.real() + d * d) / (d * d * (d + 1.0));
}

CMatrix qubit_to_qutrit(const CMatrix& rho8) {
    const auto idx = computational_indices(3);
    CMatrix out = CMatrix::Zero(27, 27);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            out(idx[i], idx[j]) = rho8(i, j);
        }
    }
    return out;
}

CMatrix qutrit_to_qubit(const CMatrix& rho27, LeakagePolicy policy) {
    if (policy == LeakagePolicy::Discard) {
        return restrict_computational(rho27, 3);
    }
    CMatrix k0 = CMatrix::Zero(2, 3);
    k0(0, 0) = 1.0;
    k0(1, 1) = 1.0;
    CMatrix k1 = CMatrix::Zero(2, 3);
    k1(1, 2) = 1.0;
    const CMatrix ks[2] = {k0, k1};
    CMatrix out = CMatrix::Zero(8, 8);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                const CMatrix k = kron({ks[a], ks[b], ks[c]});
                out += k * rho27 * k.adjoint();
            }
        }
    }
    return out;
}

QubitChannel perturbative_channel(const CMatrix& h, const std::vector<JumpOperator>& jumps, double t, int panels) {
    return [h, jumps, t, panels](const CMatrix& rho8) {
        const auto eig = hermitian_eig(rho8);
        const Eigen::Index top = eig.values.size() - 1;
        if (std::abs(eig.values(top) - rho8.trace().real()) > 1e-9) {
            throw std::invalid_argument("perturbative_channel: input must be a pure state");
        }
        const CVector psi8 = std::sqrt(eig.values(top)) * eig.vectors.col(top);
        const auto idx = computational_indices(3);
        CVector psi = CVector::Zero(27);
        for (int i = 0; i < 8; ++i) {
            psi(idx[i]) = psi8(i);
        }
        const auto res = perturbative_evolve(psi, h, jumps, t, panels);
        return qutrit_to_qubit(res.rho0 + res.rho1, LeakagePolicy::Discard);
    };
}

QubitChannel lindblad_channel(const CMatrix& h, const std::vector<JumpOperator>& jumps, double t) {
    return [h, jumps, t](const CMatrix& rho8) {
        return qutrit_to_qubit(lindblad_evolve(qubit_to_qutrit(rho8), h, jumps, t), LeakagePolicy::Discard);
    };
}

CMatrix qutrit_channel_choi(const CMatrix& h, const std::vector<JumpOperator>& jumps, double t,
                            LeakagePolicy policy) {
    CMatrix choi = CMatrix::Zero(64, 64);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            CMatrix e = CMatrix::Zero(8, 8);
            e(i, j) = 1.0;
            const CMatrix out = qutrit_to_qubit(lindblad_evolve(qubit_to_qutrit(e), h, jumps, t), policy);
            // |i><j| (x) Phi(|i><j|), input factor most significant.
            choi.block(i * 8, j * 8, 8, 8) = out;
        }
    }
    return choi;
}

CoherenceLimit coherence_limit(const DecoherenceRates& r, double tau) {
    r.validate();
    const double d = 8.0;
    const double loss = tau * (5.0 / 9 * r.gamma1[0] + 7.0 / 18 * r.gamma1[1] + 7.0 / 18 * r.gamma1[2] +
                               61.0 / 72 * r.gamma_phi[0] + 125.0 / 288 * r.gamma_phi[1] +
                               125.0 / 288 * r.gamma_phi[2]);
    CoherenceLimit out;
    out.f_av = 1.0 - loss;
    out.f_chi = 1.0 - loss * (d + 1) / d;
    for (int q = 0; q < 3; ++q) {
        if (r.gamma1[q] * tau > 0.1 || r.gamma_phi[q] * tau > 0.1) {
            out.small_rate_warning = true;
        }
    }
    return out;
}

double percentile(std::vector<double> data, double q) {
    if (data.empty()) {
        throw std::invalid_argument("percentile: empty data");
    }
    std::sort(data.begin(), data.end());
    const double pos = q / 100.0 * static_cast<double>(data.size() - 1);
    const std::size_t i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= data.size()) {
        return data.back();
    }
    const double frac = pos - static_cast<double>(i);
    return data[i] + frac * (data[i + 1] - data[i]);
}

MonteCarloLimit monte_carlo_limit(const CoherenceTimeDistribution& dist, double tau, int n, std::uint64_t seed,
                                  unsigned threads) {
    if (n < 100) {
        throw std::invalid_argument("monte_carlo_limit: need at least 100 samples");
    }
    MonteCarloLimit out;
    out.point = coherence_limit(DecoherenceRates::from_times(dist.t1_mean, dist.t2star_mean), tau).f_chi;
    out.f_chi.resize(n);
    std::vector<std::uint64_t> rejected(n, 0);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        std::mt19937_64 rng(split_seed(seed, i));
        std::normal_distribution<double> z(0.0, 1.0);
        DecoherenceRates r;
        for (int q = 0; q < 3; ++q) {
            for (;;) {
                const double t1 = dist.t1_mean[q] + dist.t1_sd[q] * z(rng);
                const double t2 = dist.t2star_mean[q] + dist.t2star_sd[q] * z(rng);
                if (t1 > 0 && t2 > 0 && 1.0 / t2 - 0.5 / t1 >= 0) {
                    r.gamma1[q] = 1.0 / t1;
                    r.gamma_phi[q] = 1.0 / t2 - 0.5 / t1;
                    break;
                }
                ++rejected[i];
                if (rejected[i] > 1000000) {
                    throw NumericalError("monte_carlo_limit: distribution is almost entirely unphysical");
                }
            }
        }
        out.f_chi[i] = coherence_limit(r, tau).f_chi;
    });
    for (auto c : rejected) {
        out.rejected += c;
    }
    out.lo = percentile(out.f_chi, 2.5);
    out.hi = percentile(out.f_chi, 97.5);
    return out;
}

}  // namespace cczs
