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

#include "cczs/process.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cczs/noise.hpp"
#include "cczs/optimize.hpp"
#include "cczs/parallel.hpp"

namespace cczs {
namespace {

constexpr int kD = QuantumProcess::kDim;

CMatrix trace_out_output(const CMatrix& choi) {
    CMatrix out = CMatrix::Zero(kD, kD);
    for (int i = 0; i < kD; ++i) {
        for (int j = 0; j < kD; ++j) {
            Complex acc{0.0, 0.0};
            for (int k = 0; k < kD; ++k) {
                acc += choi(i * kD + k, j * kD + k);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

CMatrix pauli_basis_matrix() {
    CMatrix b(kD * kD, kD * kD);
    for (int a = 0; a < kD * kD; ++a) {
        b.col(a) = vec(pauli_string(a, 3));
    }
    return b;
}

const CMatrix& pauli_basis() {
    static const CMatrix b = pauli_basis_matrix();
    return b;
}

}  // namespace

double QuantumProcess::tp_error() const {
    return (trace_out_output(choi) - CMatrix::Identity(kD, kD)).cwiseAbs().maxCoeff();
}

double QuantumProcess::min_eigenvalue() const {
    return hermitian_eig(choi, 1e-8).values.minCoeff();
}

QuantumProcess choi_from_unitary(const CMatrix& u) {
    if (u.rows() != kD || u.cols() != kD) {
        throw std::invalid_argument("choi_from_unitary: expects 8x8");
    }
    const CVector v = vec(u);
    QuantumProcess p;
    p.choi = v * v.adjoint();
    return p;
}

QuantumProcess choi_from_kraus(const std::vector<CMatrix>& kraus) {
    QuantumProcess p;
    for (const auto& k : kraus) {
        if (k.rows() != kD || k.cols() != kD) {
            throw std::invalid_argument("choi_from_kraus: expects 8x8 operators");
        }
        const CVector v = vec(k);
        p.choi += v * v.adjoint();
    }
    return p;
}

QuantumProcess choi_from_map(const std::function<CMatrix(const CMatrix&)>& channel) {
    QuantumProcess p;
    for (int i = 0; i < kD; ++i) {
        for (int j = 0; j < kD; ++j) {
            CMatrix e = CMatrix::Zero(kD, kD);
            e(i, j) = 1.0;
            p.choi.block(i * kD, j * kD, kD, kD) = channel(e);
        }
    }
    return p;
}

CMatrix apply_choi(const QuantumProcess& p, const CMatrix& rho) {
    if (rho.rows() != kD || rho.cols() != kD || p.choi.rows() != kD * kD) {
        throw std::invalid_argument("apply_choi: dimension mismatch");
    }
    CMatrix out = CMatrix::Zero(kD, kD);
    for (int i = 0; i < kD; ++i) {
        for (int j = 0; j < kD; ++j) {
            if (rho(i, j) != Complex(0.0, 0.0)) {
                out += rho(i, j) * p.choi.block(i * kD, j * kD, kD, kD);
            }
        }
    }
    return out;
}

CMatrix to_chi(const QuantumProcess& p) {
    const CMatrix& b = pauli_basis();
    return b.adjoint() * p.choi * b / double(kD * kD);
}

QuantumProcess from_chi(const CMatrix& chi) {
    const CMatrix& b = pauli_basis();
    QuantumProcess p;
    p.choi = b * chi * b.adjoint();
    return p;
}

RMatrix to_ptm(const QuantumProcess& p) {
    RMatrix r(kD * kD, kD * kD);
    for (int b = 0; b < kD * kD; ++b) {
        const CMatrix out = apply_choi(p, pauli_string(b, 3));
        r.col(b) = pauli_coefficients(out, 3).real() / double(kD);
    }
    return r;
}

QuantumProcess from_ptm(const RMatrix& r) {
    if (r.rows() != kD * kD || r.cols() != kD * kD) {
        throw std::invalid_argument("from_ptm: expects 64x64");
    }
    QuantumProcess p;
    p.choi.setZero();
    for (int b = 0; b < kD * kD; ++b) {
        const CMatrix out = from_pauli_coefficients(r.col(b).cast<Complex>(), 3);
        p.choi += kron(pauli_string(b, 3).transpose(), out) / double(kD);
    }
    return p;
}

std::vector<CMatrix> to_kraus(const QuantumProcess& p, double tol) {
    const auto eig = hermitian_eig(p.choi, 1e-8);
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    if (eig.values.minCoeff() < -1e-8 * scale) {
        throw NumericalError("to_kraus: Choi matrix has a negative eigenvalue");
    }
    std::vector<CMatrix> out;
    for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k) {
        if (eig.values(k) > tol * scale) {
            out.push_back(std::sqrt(eig.values(k)) * unvec(eig.vectors.col(k), kD, kD));
        }
    }
    return out;
}

double process_fidelity(const CMatrix& chi_a, const CMatrix& chi_b) {
    const CMatrix a = chi_a / chi_a.trace().real();
    const CMatrix b = chi_b / chi_b.trace().real();
    return uhlmann_fidelity(a, b);
}

double process_fidelity(const QuantumProcess& p, const CMatrix& u) {
    const CVector v = vec(u);
    return (v.adjoint() * p.choi * v)(0, 0).real() / double(kD * kD);
}

QuantumProcess depolarize(const QuantumProcess& p, double lambda) {
    QuantumProcess out;
    out.choi = (1 - lambda) * p.choi + lambda * CMatrix::Identity(kD * kD, kD * kD) / double(kD);
    return out;
}

QuantumProcess random_cptp(std::uint64_t seed, int kraus_rank) {
    const CMatrix u = random_unitary(kD * kraus_rank, seed);
    std::vector<CMatrix> kraus;
    for (int k = 0; k < kraus_rank; ++k) {
        kraus.push_back(u.block(k * kD, 0, kD, kD));
    }
    return choi_from_kraus(kraus);
}

void TomographyDataset::validate() const {
    if (shots <= 0) {
        throw std::invalid_argument("TomographyDataset: shots must be positive");
    }
    if (counts.size() != 64 * 27 * 8) {
        throw std::invalid_argument("TomographyDataset: expected 64 x 27 x 8 counts");
    }
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 27; ++j) {
            std::int64_t total = 0;
            for (int s = 0; s < 8; ++s) {
                if (at(i, j, s) < 0) {
                    throw std::invalid_argument("TomographyDataset: negative count");
                }
                total += at(i, j, s);
            }
            if (total != shots) {
                throw std::invalid_argument("TomographyDataset: counts do not sum to shots");
            }
        }
    }
}

std::vector<double> TomographyDataset::frequencies() const {
    std::vector<double> f(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        f[k] = static_cast<double>(counts[k]) / shots;
    }
    return f;
}

DesignMatrix design_matrix(const NoisyGateSetModel& gsm) {
    DesignMatrix a;
    const auto probes = gsm.probe_states();
    const auto effects = gsm.effects();
    a.p.resize(64, 64);
    for (int i = 0; i < 64; ++i) {
        a.p.row(i) = pauli_coefficients(probes[i].transpose(), 3).real().transpose();
    }
    a.q.resize(216, 64);
    for (int k = 0; k < 216; ++k) {
        a.q.row(k) = pauli_coefficients(effects[k], 3).real().transpose();
    }
    return a;
}

Eigen::Index DesignMatrix::rank(double tol) const {
    Eigen::JacobiSVD<RMatrix> sp(p);
    Eigen::JacobiSVD<RMatrix> sq(q);
    sp.setThreshold(tol);
    sq.setThreshold(tol);
    return sp.rank() * sq.rank();
}

namespace {

// c_ab with rho_Phi = sum_ab c_ab P_a (x) P_b, as a 64 x 64 real matrix.
RMatrix choi_pauli_matrix(const CMatrix& choi) {
    const CVector c = pauli_coefficients(choi, 6) / 64.0;
    RMatrix out(64, 64);
    for (int a = 0; a < 64; ++a) {
        for (int b = 0; b < 64; ++b) {
            out(a, b) = c(a * 64 + b).real();
        }
    }
    return out;
}

CMatrix choi_from_pauli_matrix(const RMatrix& c) {
    CVector flat(4096);
    for (int a = 0; a < 64; ++a) {
        for (int b = 0; b < 64; ++b) {
            flat(a * 64 + b) = c(a, b);
        }
    }
    return from_pauli_coefficients(flat, 6);
}

}  // namespace

std::vector<double> DesignMatrix::apply(const QuantumProcess& channel) const {
    const RMatrix probs = p * choi_pauli_matrix(channel.choi) * q.transpose();  // 64 x 216
    std::vector<double> out(64 * 216);
    for (int i = 0; i < 64; ++i) {
        for (int k = 0; k < 216; ++k) {
            out[i * 216 + k] = probs(i, k);
        }
    }
    return out;
}

RVector DesignMatrix::row(int i, int j, int s) const {
    const RVector pr = p.row(i).transpose();
    const RVector qr = q.row(j * 8 + s).transpose();
    RVector out(4096);
    for (int a = 0; a < 64; ++a) {
        out.segment(a * 64, 64) = pr(a) * qr;
    }
    return out;
}

std::vector<double> qpt_probabilities(const QuantumProcess& channel, const NoisyGateSetModel& gsm) {
    auto probs = design_matrix(gsm).apply(channel);
    for (int ij = 0; ij < 64 * 27; ++ij) {
        double total = 0.0;
        for (int s = 0; s < 8; ++s) {
            total += probs[ij * 8 + s];
        }
        if (std::abs(total - 1.0) > 1e-8) {
            throw std::invalid_argument("qpt_probabilities: outcome probabilities do not sum to 1");
        }
    }
    return probs;
}

namespace {

TomographyDataset sample_dataset(const std::vector<double>& probs, int shots, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    TomographyDataset ds;
    ds.shots = shots;
    for (int ij = 0; ij < 64 * 27; ++ij) {
        sample_multinomial(&probs[ij * 8], 8, shots, rng, &ds.counts[ij * 8]);
    }
    return ds;
}

}  // namespace

TomographyDataset simulate_qpt_dataset(const QuantumProcess& channel, const NoisyGateSetModel& gsm, int shots,
                                       std::uint64_t seed) {
    if (shots <= 0) {
        throw std::invalid_argument("simulate_qpt_dataset: shots must be positive");
    }
    return sample_dataset(qpt_probabilities(channel, gsm), shots, seed);
}

QuantumProcess project_cptp(const CMatrix& choi, ProjectionInfo* info, double tol, int max_iter) {
    const int n = kD * kD;
    if (choi.rows() != n || choi.cols() != n) {
        throw std::invalid_argument("project_cptp: expects a 64x64 Choi matrix");
    }
    auto proj_tp = [](const CMatrix& x) {
        const CMatrix defect = trace_out_output(x) - CMatrix::Identity(kD, kD);
        return CMatrix(x - kron(defect, CMatrix::Identity(kD, kD)) / double(kD));
    };
    auto proj_psd = [](const CMatrix& x) {
        const auto eig = hermitian_eig(0.5 * (x + x.adjoint()), 1e-6);
        const RVector lam = eig.values.cwiseMax(0.0);
        return CMatrix(eig.vectors * lam.cast<Complex>().asDiagonal() * eig.vectors.adjoint());
    };
    CMatrix x = 0.5 * (choi + choi.adjoint());
    CMatrix pk = CMatrix::Zero(n, n);
    CMatrix qk = CMatrix::Zero(n, n);
    ProjectionInfo local;
    for (int it = 0; it < max_iter; ++it) {
        const CMatrix y = proj_tp(x + pk);
        pk = x + pk - y;
        const CMatrix xn = proj_psd(y + qk);
        qk = y + qk - xn;
        const double change = (xn - x).norm();
        x = xn;
        local.iterations = it + 1;
        if (change < tol) {
            local.converged = true;
            break;
        }
    }
    if (info != nullptr) {
        *info = local;
    }
    QuantumProcess out;
    out.choi = 0.5 * (x + x.adjoint());
    return out;
}

Reconstruction pls_reconstruct(const std::vector<double>& frequencies, const DesignMatrix& a) {
    if (frequencies.size() != 64 * 216) {
        throw std::invalid_argument("pls_reconstruct: expected 64 x 27 x 8 frequencies");
    }
    RMatrix f(64, 216);
    for (int i = 0; i < 64; ++i) {
        for (int k = 0; k < 216; ++k) {
            f(i, k) = frequencies[i * 216 + k];
        }
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> e1(a.p.transpose() * a.p);
    Eigen::SelfAdjointEigenSolver<RMatrix> e2(a.q.transpose() * a.q);
    const RMatrix& u1 = e1.eigenvectors();
    const RMatrix& u2 = e2.eigenvectors();
    const RVector& d1 = e1.eigenvalues();
    const RVector& d2 = e2.eigenvalues();
    const double ridge = 1e-12 * d1.maxCoeff() * d2.maxCoeff();
    RMatrix g = u1.transpose() * a.p.transpose() * f * a.q * u2;
    for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < g.cols(); ++j) {
            g(i, j) /= d1(i) * d2(j) + ridge;
        }
    }
    const RMatrix c = u1 * g * u2.transpose();
    Reconstruction r;
    r.least_squares.choi = choi_from_pauli_matrix(c);
    r.process = project_cptp(r.least_squares.choi, &r.projection);
    return r;
}

Reconstruction pls_reconstruct(const std::vector<double>& frequencies, const NoisyGateSetModel& gsm) {
    return pls_reconstruct(frequencies, design_matrix(gsm));
}

Reconstruction pls_reconstruct(const TomographyDataset& data, const NoisyGateSetModel& gsm) {
    data.validate();
    return pls_reconstruct(data.frequencies(), design_matrix(gsm));
}

BootstrapResult bootstrap(const TomographyDataset& data, const NoisyGateSetModel& gsm, int n_boot, std::uint64_t seed,
                          const std::function<double(const QuantumProcess&)>& post, unsigned threads) {
    if (n_boot < 2) {
        throw std::invalid_argument("bootstrap: need at least 2 replicates");
    }
    data.validate();
    const DesignMatrix a = design_matrix(gsm);
    const std::vector<double> freq = data.frequencies();
    BootstrapResult res;
    res.values.resize(n_boot);
    std::vector<char> ok(n_boot, 1);
    parallel_for(static_cast<std::size_t>(n_boot), threads, [&](std::size_t r) {
        const TomographyDataset resampled = sample_dataset(freq, data.shots, split_seed(seed, r));
        const Reconstruction rec = pls_reconstruct(resampled.frequencies(), a);
        ok[r] = rec.projection.converged ? 1 : 0;
        res.values[r] = post(rec.process);
    });
    double sum = 0.0;
    for (double v : res.values) sum += v;
    res.mean = sum / n_boot;
    double var = 0.0;
    for (double v : res.values) var += (v - res.mean) * (v - res.mean);
    res.stdev = std::sqrt(var / (n_boot - 1));
    res.p025 = percentile(res.values, 2.5);
    res.p975 = percentile(res.values, 97.5);
    for (char c : ok) {
        if (!c) ++res.unconverged;
    }
    return res;
}

ControlErrorFree control_error_free(const QuantumProcess& p, const GateParams& start) {
    auto fid = [&](double th, double ph, double ga) { return process_fidelity(p, build_cczs({th, ph, ga})); };
    const int g = 16;
    double best = -1.0;
    std::vector<double> best_x{start.theta, start.phi, start.gamma};
    for (int i = 0; i < g; ++i) {
        const double th = kPi * (i + 0.5) / g;
        for (int j = 0; j < g; ++j) {
            const double ph = -kPi + 2 * kPi * (j + 0.5) / g;
            for (int k = 0; k < g; ++k) {
                const double ga = -kPi + 2 * kPi * (k + 0.5) / g;
                const double f = fid(th, ph, ga);
                if (f > best) {
                    best = f;
                    best_x = {th, ph, ga};
                }
            }
        }
    }
    auto objective = [&](const std::vector<double>& x) { return -fid(x[0], x[1], x[2]); };
    ControlErrorFree out;
    out.fidelity = -1.0;
    for (const auto& seed : {best_x, std::vector<double>{start.theta, start.phi, start.gamma}}) {
        const auto r = nelder_mead(objective, seed, {0.05, 0.05, 0.05}, 10000, 1e-12, 1e-16, 200);
        if (-r.value > out.fidelity) {
            out.fidelity = -r.value;
            out.params = GateParams{r.x[0], r.x[1], r.x[2]}.canonical();
            out.converged = r.converged;
        }
    }
    return out;
}

LeadingKraus leading_kraus(const QuantumProcess& p) {
    const auto eig = hermitian_eig(p.choi, 1e-8);
    const Eigen::Index top = eig.values.size() - 1;
    LeadingKraus lk;
    lk.weight = eig.values(top) / kD;
    lk.degenerate = eig.values(top) - eig.values(top - 1) < 1e-9;
    CMatrix k = std::sqrt(std::max(0.0, eig.values(top))) * unvec(eig.vectors.col(top), kD, kD);
    Eigen::Index r = 0, c = 0;
    k.cwiseAbs().maxCoeff(&r, &c);
    const Complex pivot = k(r, c);
    if (std::abs(pivot) > 0) {
        k *= std::conj(pivot) / std::abs(pivot);
    }
    lk.op = k;
    return lk;
}

PtmOverlap ptm_overlap(const RMatrix& ideal, const RMatrix& e, double threshold) {
    if (ideal.rows() != e.rows() || ideal.cols() != e.cols()) {
        throw std::invalid_argument("ptm_overlap: shape mismatch");
    }
    PtmOverlap out;
    out.d = ideal.transpose() * e - RMatrix::Identity(e.cols(), e.cols());
    out.max_abs = out.d.cwiseAbs().maxCoeff();
    out.significant = static_cast<int>((out.d.array().abs() > threshold).count());
    return out;
}

}  // namespace cczs
