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

#include "cczs/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "cczs/optimize.hpp"

namespace cczs {

HilbertDims DeviceParams::dims() const {
    std::vector<int> d;
    for (const auto& m : modes) {
        d.push_back(m.levels);
    }
    return HilbertDims(d);
}

int DeviceParams::mode_index(const std::string& name) const {
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].name == name) {
            return static_cast<int>(i);
        }
    }
    throw std::invalid_argument("DeviceParams: unknown mode '" + name + "'");
}

std::vector<int> DeviceParams::coupler_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].coupler) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

void DeviceParams::validate() const {
    if (modes.empty()) {
        throw std::invalid_argument("DeviceParams: no modes");
    }
    if (modes.size() > 5) {
        throw std::invalid_argument("DeviceParams: more than 5 modes");
    }
    for (const auto& m : modes) {
        if (m.levels < 2 || m.levels > 4) {
            throw std::invalid_argument("DeviceParams: levels per mode must be 2..4");
        }
        if (!(m.omega > 0)) {
            throw std::invalid_argument("DeviceParams: mode frequency must be positive");
        }
        if (!(m.eta < 0)) {
            throw std::invalid_argument("DeviceParams: transmon anharmonicity must be negative");
        }
    }
    for (const auto& c : couplings) {
        if (c.a < 0 || c.b < 0 || c.a >= static_cast<int>(modes.size()) || c.b >= static_cast<int>(modes.size()) ||
            c.a == c.b) {
            throw std::invalid_argument("DeviceParams: bad coupling indices");
        }
        if (!(c.j >= 0)) {
            throw std::invalid_argument("DeviceParams: couplings must be non-negative");
        }
    }
}

DeviceParams DeviceParams::subset(const std::vector<std::string>& names) const {
    DeviceParams out;
    std::map<int, int> remap;
    for (const auto& n : names) {
        const int i = mode_index(n);
        remap[i] = static_cast<int>(out.modes.size());
        out.modes.push_back(modes[i]);
    }
    for (const auto& c : couplings) {
        if (remap.count(c.a) && remap.count(c.b)) {
            out.couplings.push_back({remap[c.a], remap[c.b], c.j});
        }
    }
    return out;
}

int DeviceParams::basis_index(const std::vector<std::pair<std::string, int>>& occupation) const {
    std::vector<int> digits(modes.size(), 0);
    for (const auto& [name, n] : occupation) {
        digits[mode_index(name)] = n;
    }
    return dims().index(digits);
}

double coupler_frequency(double omega_c0, double flux) {
    return omega_c0 * std::sqrt(std::abs(std::cos(kPi * flux)));
}

namespace {

std::vector<double> mode_frequencies(const DeviceParams& p, const std::vector<double>& flux) {
    const auto cidx = p.coupler_indices();
    if (!flux.empty() && flux.size() != cidx.size()) {
        throw std::invalid_argument("device: one flux value per coupler expected");
    }
    std::vector<double> w;
    for (const auto& m : p.modes) {
        w.push_back(m.omega);
    }
    for (std::size_t k = 0; k < flux.size(); ++k) {
        w[cidx[k]] = coupler_frequency(p.modes[cidx[k]].omega, flux[k]);
    }
    return w;
}

std::vector<double> diagonal_energies(const DeviceParams& p, const std::vector<double>& w) {
    const HilbertDims dims = p.dims();
    std::vector<double> e(dims.total());
    for (int s = 0; s < dims.total(); ++s) {
        const auto n = dims.digits(s);
        double v = 0.0;
        for (std::size_t m = 0; m < p.modes.size(); ++m) {
            v += w[m] * n[m] + 0.5 * p.modes[m].eta * n[m] * (n[m] - 1);
        }
        e[s] = v;
    }
    return e;
}

struct Entry {
    int row;
    int col;
    double value;
};

std::vector<Entry> exchange_entries(const DeviceParams& p) {
    const HilbertDims dims = p.dims();
    std::vector<int> stride(p.modes.size(), 1);
    for (int k = static_cast<int>(p.modes.size()) - 2; k >= 0; --k) {
        stride[k] = stride[k + 1] * p.modes[k + 1].levels;
    }
    std::vector<Entry> out;
    for (int s = 0; s < dims.total(); ++s) {
        const auto n = dims.digits(s);
        for (const auto& c : p.couplings) {
            // (a^dag + a)(b^dag + b) |s>: each factor raises or lowers by one.
            for (int da : {-1, 1}) {
                const int na = n[c.a] + da;
                if (na < 0 || na >= p.modes[c.a].levels) {
                    continue;
                }
                const double fa = std::sqrt(static_cast<double>(std::max(n[c.a], na)));
                for (int db : {-1, 1}) {
                    const int nb = n[c.b] + db;
                    if (nb < 0 || nb >= p.modes[c.b].levels) {
                        continue;
                    }
                    const double fb = std::sqrt(static_cast<double>(std::max(n[c.b], nb)));
                    const int r = s + da * stride[c.a] + db * stride[c.b];
                    out.push_back({r, s, c.j * fa * fb});
                }
            }
        }
    }
    return out;
}

kernels::CsrMatrix to_csr(int dim, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    kernels::CsrMatrix m;
    m.rows = m.cols = static_cast<std::size_t>(dim);
    m.row_ptr.assign(dim + 1, 0);
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double v = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col) {
            v += entries[j].value;
            ++j;
        }
        if (v != 0.0) {
            m.col_idx.push_back(entries[i].col);
            m.values.emplace_back(v, 0.0);
            ++m.row_ptr[entries[i].row + 1];
        }
        i = j;
    }
    for (int r = 0; r < dim; ++r) {
        m.row_ptr[r + 1] += m.row_ptr[r];
    }
    return m;
}

}  // namespace

kernels::CsrMatrix build_hamiltonian_sparse(const DeviceParams& p, const std::vector<double>& flux) {
    p.validate();
    const int dim = p.dims().total();
    auto entries = exchange_entries(p);
    const auto e = diagonal_energies(p, mode_frequencies(p, flux));
    for (int s = 0; s < dim; ++s) {
        entries.push_back({s, s, e[s]});
    }
    return to_csr(dim, std::move(entries));
}

CMatrix build_hamiltonian(const DeviceParams& p, const std::vector<double>& flux) {
    const auto csr = build_hamiltonian_sparse(p, flux);
    CMatrix h = CMatrix::Zero(csr.rows, csr.cols);
    for (std::size_t r = 0; r < csr.rows; ++r) {
        for (std::int32_t k = csr.row_ptr[r]; k < csr.row_ptr[r + 1]; ++k) {
            h(r, csr.col_idx[k]) = csr.values[k];
        }
    }
    return h;
}

double FluxPulse::envelope(double t) const {
    if (t < 0 || t > duration()) {
        return 0.0;
    }
    if (t < rise) {
        return amplitude * 0.5 * (1 - std::cos(kPi * t / rise));
    }
    if (t <= rise + flat) {
        return amplitude;
    }
    const double u = duration() - t;
    return fall > 0 ? amplitude * 0.5 * (1 - std::cos(kPi * u / fall)) : amplitude;
}

double FluxPulse::flux(double t) const {
    return bias + envelope(t) * std::cos(omega_d * t + phase);
}

void FluxPulse::validate() const {
    if (rise < 0 || fall < 0 || flat < 0) {
        throw std::invalid_argument("FluxPulse: negative segment length");
    }
    if (std::abs(bias) + std::abs(amplitude) >= 0.5) {
        throw std::invalid_argument("FluxPulse: flux excursion leaves the principal branch |Phi| < 0.5");
    }
}

std::vector<double> Trajectory::population(int basis) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) {
        out.push_back(std::norm(s(basis)));
    }
    return out;
}

namespace {

struct Integrator {
    const DeviceParams& p;
    const std::vector<FluxPulse>& pulses;
    std::vector<int> cidx;
    std::vector<double> energies;            // at bias
    std::vector<double> bias_freq;           // per coupler
    std::vector<std::vector<int>> occupation;  // per coupler, per basis state
    kernels::CsrMatrix v;
    int dim;

    Integrator(const DeviceParams& params, const std::vector<FluxPulse>& pl) : p(params), pulses(pl) {
        cidx = p.coupler_indices();
        std::vector<double> flux;
        for (const auto& fp : pulses) {
            flux.push_back(fp.bias);
        }
        const auto w = mode_frequencies(p, flux);
        energies = diagonal_energies(p, w);
        dim = static_cast<int>(energies.size());
        for (std::size_t k = 0; k < pulses.size(); ++k) {
            bias_freq.push_back(w[cidx[k]]);
        }
        const HilbertDims dims = p.dims();
        occupation.assign(pulses.size(), std::vector<int>(dim));
        for (int s = 0; s < dim; ++s) {
            const auto n = dims.digits(s);
            for (std::size_t k = 0; k < pulses.size(); ++k) {
                occupation[k][s] = n[cidx[k]];
            }
        }
        v = to_csr(dim, exchange_entries(p));
    }

    double max_frequency() const {
        double df = 0.0;
        for (std::size_t r = 0; r < v.rows; ++r) {
            for (std::int32_t k = v.row_ptr[r]; k < v.row_ptr[r + 1]; ++k) {
                df = std::max(df, std::abs(energies[r] - energies[v.col_idx[k]]));
            }
        }
        double swing = 0.0;
        for (std::size_t k = 0; k < pulses.size(); ++k) {
            const auto& fp = pulses[k];
            const double w0 = p.modes[cidx[k]].omega;
            double s = 0.0;
            for (int i = 0; i <= 200; ++i) {
                const double phi = fp.bias - fp.amplitude + 2 * fp.amplitude * i / 200.0;
                s = std::max(s, std::abs(coupler_frequency(w0, phi) - bias_freq[k]));
            }
            swing += 2 * s;
        }
        return (df + swing) / (2 * kPi);
    }

    // Modulation-induced shift of each coupler frequency at time t.
    void shifts(double t, std::vector<double>& out) const {
        out.resize(pulses.size());
        for (std::size_t k = 0; k < pulses.size(); ++k) {
            out[k] = coupler_frequency(p.modes[cidx[k]].omega, pulses[k].flux(t)) - bias_freq[k];
        }
    }

    void phases(double t, const std::vector<double>& acc, CVector& ph) const {
        ph.resize(dim);
        // Per-coupler factors exp(-i n phi_k) for n up to levels-1.
        std::vector<std::vector<Complex>> table(pulses.size());
        for (std::size_t k = 0; k < pulses.size(); ++k) {
            const int lv = p.modes[cidx[k]].levels;
            table[k].resize(lv);
            for (int n = 0; n < lv; ++n) {
                table[k][n] = std::polar(1.0, -n * acc[k]);
            }
        }
        for (int s = 0; s < dim; ++s) {
            Complex z = std::polar(1.0, -energies[s] * t);
            for (std::size_t k = 0; k < pulses.size(); ++k) {
                z *= table[k][occupation[k][s]];
            }
            ph(s) = z;
        }
    }

    // dy/dt = -i conj(ph) * V (ph * y)
    void rhs(double t, const CVector& y, const std::vector<double>& acc, CVector& dy, std::vector<double>& dacc,
             CVector& ph, CVector& tmp) const {
        const auto& kern = kernels::active();
        phases(t, acc, ph);
        tmp.resize(dim);
        kern.cmul(dim, ph.data(), y.data(), tmp.data());
        dy.resize(dim);
        kern.csr_matvec(v.view(), tmp.data(), dy.data());
        const CVector phc = (-kI) * ph.conjugate();
        kern.cmul(dim, phc.data(), dy.data(), dy.data());
        shifts(t, dacc);
    }
};

}  // namespace

Trajectory evolve_device(const DeviceParams& p, const std::vector<FluxPulse>& pulses_in, const CVector& psi0,
                         const std::vector<double>& times, const EvolveOptions& options) {
    p.validate();
    const auto cidx = p.coupler_indices();
    std::vector<FluxPulse> pulses = pulses_in;
    if (pulses.empty()) {
        pulses.resize(cidx.size());
    }
    if (pulses.size() != cidx.size()) {
        throw std::invalid_argument("evolve_device: one pulse per coupler expected");
    }
    for (const auto& fp : pulses) {
        fp.validate();
    }
    const Integrator integ(p, pulses);
    if (psi0.size() != integ.dim) {
        throw std::invalid_argument("evolve_device: state dimension mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve_device: initial state must be normalized");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0 || (i > 0 && times[i] < times[i - 1])) {
            throw std::invalid_argument("evolve_device: times must be non-negative and sorted");
        }
    }

    const double fmax = std::max(integ.max_frequency(), 1.0);
    double dt_max = 1.0 / (options.samples_per_period * fmax);
    const std::size_t nc = pulses.size();

    for (int attempt = 0; attempt <= options.max_halvings; ++attempt, dt_max *= 0.5) {
        Trajectory traj;
        traj.dt = dt_max;
        CVector y = psi0;
        std::vector<double> acc(nc, 0.0);
        double t = 0.0;
        CVector k1, k2, k3, k4, ph, tmp, ytmp;
        std::vector<double> a1, a2, a3, a4, acctmp(nc);
        bool failed = false;
        for (double target : times) {
            const double span = target - t;
            const int n = span > 0 ? static_cast<int>(std::ceil(span / dt_max - 1e-9)) : 0;
            const double h = n > 0 ? span / n : 0.0;
            for (int s = 0; s < n; ++s) {
                integ.rhs(t, y, acc, k1, a1, ph, tmp);
                ytmp = y + (0.5 * h) * k1;
                for (std::size_t k = 0; k < nc; ++k) acctmp[k] = acc[k] + 0.5 * h * a1[k];
                integ.rhs(t + 0.5 * h, ytmp, acctmp, k2, a2, ph, tmp);
                ytmp = y + (0.5 * h) * k2;
                for (std::size_t k = 0; k < nc; ++k) acctmp[k] = acc[k] + 0.5 * h * a2[k];
                integ.rhs(t + 0.5 * h, ytmp, acctmp, k3, a3, ph, tmp);
                ytmp = y + h * k3;
                for (std::size_t k = 0; k < nc; ++k) acctmp[k] = acc[k] + h * a3[k];
                integ.rhs(t + h, ytmp, acctmp, k4, a4, ph, tmp);
                const auto& kern = kernels::active();
                kern.caxpy(integ.dim, h / 6, k1.data(), y.data());
                kern.caxpy(integ.dim, h / 3, k2.data(), y.data());
                kern.caxpy(integ.dim, h / 3, k3.data(), y.data());
                kern.caxpy(integ.dim, h / 6, k4.data(), y.data());
                for (std::size_t k = 0; k < nc; ++k) {
                    acc[k] += h / 6 * (a1[k] + 2 * a2[k] + 2 * a3[k] + a4[k]);
                }
                t = (s + 1 == n) ? target : t + h;
                ++traj.steps;
            }
            const double drift = std::abs(y.norm() - 1.0);
            traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
            if (drift > options.norm_tolerance) {
                failed = true;
                break;
            }
            integ.phases(t, acc, ph);
            traj.times.push_back(target);
            traj.states.push_back(ph.cwiseProduct(y));
        }
        if (!failed) {
            return traj;
        }
    }
    throw NumericalError("evolve_device: norm drift exceeds tolerance after step halving");
}

EffectiveCouplingFit extract_effective_coupling(const std::vector<double>& times,
                                                const std::vector<double>& population) {
    if (times.size() != population.size() || times.size() < 8) {
        throw std::invalid_argument("extract_effective_coupling: need at least 8 matching samples");
    }
    const auto [lo_it, hi_it] = std::minmax_element(population.begin(), population.end());
    if (*hi_it - *lo_it < 1e-3) {
        throw NumericalError("extract_effective_coupling: no oscillation detected");
    }
    // Periodogram seed for the population frequency 2 Lambda.
    const std::size_t n = times.size();
    double mean = 0.0;
    for (double v : population) mean += v;
    mean /= static_cast<double>(n);
    const double span = times.back() - times.front();
    double min_dt = span;
    for (std::size_t i = 1; i < n; ++i) min_dt = std::min(min_dt, times[i] - times[i - 1]);
    double best_w = 0.0;
    double best_pw = -1.0;
    const int grid = 4000;
    for (int k = 1; k <= grid; ++k) {
        const double w = (kPi / min_dt) * k / grid;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            re += (population[i] - mean) * std::cos(w * times[i]);
            im += (population[i] - mean) * std::sin(w * times[i]);
        }
        if (re * re + im * im > best_pw) {
            best_pw = re * re + im * im;
            best_w = w;
        }
    }
    const double lambda0 = 0.5 * best_w;
    auto model = [&](const std::vector<double>& x, double t) {
        const double s = std::sin(x[1] * lambda0 * (t - x[2] / lambda0));
        return x[0] * s * s;
    };
    auto objective = [&](const std::vector<double>& x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = model(x, times[i]) - population[i];
            acc += r * r;
        }
        return acc;
    };
    MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (double phase0 : {0.0, 0.3, -0.3}) {
        auto r = nelder_mead(objective, {*hi_it, 1.0, phase0}, {0.05, 0.05, 0.1}, 20000, 1e-12, 1e-18, 400);
        if (r.value < best.value) {
            best = r;
        }
    }
    EffectiveCouplingFit fit;
    fit.amplitude = best.x[0];
    fit.lambda = std::abs(best.x[1] * lambda0);
    fit.t0 = best.x[2] / lambda0;
    fit.j_eff = fit.lambda * std::sqrt(std::max(0.0, fit.amplitude));
    fit.residual = std::sqrt(best.value / static_cast<double>(n));
    return fit;
}

double dressed_transition(const DeviceParams& p, const std::vector<double>& flux, int a, int b) {
    const auto eig = hermitian_eig(build_hamiltonian(p, flux));
    auto energy_of = [&](int basis) {
        Eigen::Index best = 0;
        eig.vectors.row(basis).cwiseAbs2().maxCoeff(&best);
        return eig.values(best);
    };
    return energy_of(b) - energy_of(a);
}

ParametricCalibration calibrate_parametric_drive(const DeviceParams& p, std::vector<FluxPulse> pulses,
                                                 std::size_t slot, int a, int b, double window, double step) {
    if (slot >= pulses.size() || !(window > 0) || !(step > 0)) {
        throw std::invalid_argument("calibrate_parametric_drive: bad slot, window or step");
    }
    const int dim = p.dims().total();
    CVector psi0 = CVector::Zero(dim);
    psi0(a) = 1.0;
    std::vector<double> times(161);
    for (std::size_t k = 0; k < times.size(); ++k) {
        times[k] = window * static_cast<double>(k) / static_cast<double>(times.size() - 1);
    }
    std::vector<double> bias;
    for (const auto& fp : pulses) bias.push_back(fp.bias);
    const double w0 = dressed_transition(p, bias, a, b);

    ParametricCalibration cal;
    auto measure = [&](int k) {
        FluxPulse& fp = pulses[slot];
        fp.omega_d = w0 + k * step;
        fp.rise = fp.fall = 0.0;
        fp.flat = window;
        ++cal.evaluations;
        const auto traj = evolve_device(p, pulses, psi0, times);
        try {
            return extract_effective_coupling(times, traj.population(b));
        } catch (const NumericalError&) {
            return EffectiveCouplingFit{};
        }
    };
    int k = 0;
    auto fc = measure(0);
    auto fu = measure(1);
    int dir = 1;
    EffectiveCouplingFit fl;
    if (fu.amplitude > fc.amplitude) {
        fl = fc;
        fc = fu;
        k = 1;
    } else {
        dir = -1;
        fl = fu;
    }
    for (int guard = 0; guard < 40; ++guard) {
        auto fn = measure(k + dir);
        if (fn.amplitude <= fc.amplitude) {
            fu = fn;
            break;
        }
        fl = fc;
        fc = fn;
        k += dir;
    }
    // fl on the -dir side of k, fu on the +dir side.
    const double y0 = fl.amplitude, y1 = fc.amplitude, y2 = fu.amplitude;
    const double denom = y0 - 2 * y1 + y2;
    const double shift = denom < 0 ? 0.5 * (y0 - y2) / denom : 0.0;
    const double k_opt = k + dir * std::clamp(shift, -0.5, 0.5);

    FluxPulse& fp = pulses[slot];
    fp.omega_d = w0 + k_opt * step;
    ++cal.evaluations;
    const auto traj = evolve_device(p, pulses, psi0, times);
    const auto fit = extract_effective_coupling(times, traj.population(b));
    cal.omega_d = fp.omega_d;
    cal.j_eff = fit.j_eff;
    cal.transfer = fit.amplitude;
    return cal;
}

}  // namespace cczs
