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

#include "cczs/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "cczs/optimize.hpp"
#include "cczs/parallel.hpp"

namespace cczs {

CVector LambdaState::vector() const {
    CVector v(3);
    v << psi1, psi2, psi3;
    return v;
}

LambdaState LambdaState::from_vector(const CVector& v) {
    if (v.size() != 3) {
        throw std::invalid_argument("LambdaState: expected 3 amplitudes");
    }
    return {v(0), v(1), v(2)};
}

double LambdaState::norm() const {
    return std::sqrt(std::norm(psi1) + std::norm(psi2) + std::norm(psi3));
}

CMatrix lambda_hamiltonian(const LambdaConfig& c) {
    CMatrix h = CMatrix::Zero(3, 3);
    h(0, 0) = -c.delta1;
    h(1, 1) = c.delta1 - c.delta3;
    h(2, 2) = c.delta3;
    h(0, 1) = c.g1;
    h(1, 0) = std::conj(c.g1);
    h(1, 2) = c.g3;
    h(2, 1) = std::conj(c.g3);
    return h;
}

CubicParams cubic_params(const LambdaConfig& c) {
    const double a1 = std::norm(c.g1);
    const double a3 = std::norm(c.g3);
    const double d1 = c.delta1;
    const double d3 = c.delta3;
    return {a1 + a3 + d1 * d1 + d3 * d3 - d1 * d3, a1 * d3 - a3 * d1 + d1 * d1 * d3 - d3 * d3 * d1};
}

std::array<double, 3> cubic_roots(double p, double q) {
    const double scale = std::max(1.0, std::abs(p));
    if (27 * q * q - 4 * p * p * p > 1e-9 * 4 * scale * scale * scale) {
        throw std::invalid_argument("cubic_roots: polynomial does not have three real roots");
    }
    std::array<double, 3> x{0.0, 0.0, 0.0};
    if (p > 0) {
        const double inner = std::max(0.0, 4 * p * p * p - 27 * q * q);
        const Complex f3 = 0.5 * Complex(27 * q, std::sqrt(27.0) * std::sqrt(inner));
        const Complex f = std::pow(f3, 1.0 / 3.0);
        const Complex xi(-0.5, std::sqrt(3.0) / 2);
        Complex xik(1.0, 0.0);
        for (int k = 0; k < 3; ++k) {
            const Complex fk = xik * f;
            x[k] = ((fk + 3 * p / fk) / 3.0).real();
            xik *= xi;
        }
        // One Newton step per root when it strictly reduces the residual.
        for (double& r : x) {
            const double res = -r * r * r + p * r + q;
            const double der = -3 * r * r + p;
            if (std::abs(der) > 1e-300) {
                const double cand = r - res / der;
                if (std::abs(-cand * cand * cand + p * cand + q) < std::abs(res)) {
                    r = cand;
                }
            }
        }
    }
    std::sort(x.begin(), x.end());
    return x;
}

namespace {

// Adjugate of (-x I - H): the closed-form numerators.
CMatrix lambda_adjugate(const LambdaConfig& c, double x) {
    const double d1 = c.delta1;
    const double d3 = c.delta3;
    const Complex g1 = c.g1;
    const Complex g3 = c.g3;
    const double a1 = std::norm(g1);
    const double a3 = std::norm(g3);
    CMatrix adj(3, 3);
    adj(0, 0) = x * x + d1 * x - a3 - d3 * d3 + d1 * d3;
    adj(0, 1) = -g1 * (x + d3);
    adj(0, 2) = g1 * g3;
    adj(1, 0) = -std::conj(g1) * (x + d3);
    adj(1, 1) = x * x + (d3 - d1) * x - d1 * d3;
    adj(1, 2) = -g3 * (x - d1);
    adj(2, 0) = std::conj(g1) * std::conj(g3);
    adj(2, 1) = -std::conj(g3) * (x - d1);
    adj(2, 2) = x * x - d3 * x - a1 - d1 * d1 + d1 * d3;
    return adj;
}

struct LambdaPropagator {
    bool fallback = false;
    std::array<double, 3> roots{};
    std::array<CMatrix, 3> residues;  // adj / (3x^2 - p)
    EigenDecomposition eig;

    explicit LambdaPropagator(const LambdaConfig& c) {
        const CubicParams cp = cubic_params(c);
        const double scale = std::max(1.0, cp.p);
        bool degenerate = false;
        try {
            roots = cubic_roots(cp.p, cp.q);
        } catch (const std::invalid_argument&) {
            degenerate = true;
        }
        for (int j = 0; j < 3 && !degenerate; ++j) {
            const double den = 3 * roots[j] * roots[j] - cp.p;
            if (std::abs(den) < kLambdaDegenerateTol * scale) {
                degenerate = true;
                break;
            }
            residues[j] = lambda_adjugate(c, roots[j]) / den;
        }
        if (degenerate) {
            fallback = true;
            eig = hermitian_eig(lambda_hamiltonian(c));
        }
    }

    CVector apply(const CVector& s0, double t) const {
        if (fallback) {
            CVector phase(3);
            for (int k = 0; k < 3; ++k) {
                phase(k) = std::exp(-kI * eig.values(k) * t);
            }
            return eig.vectors * phase.asDiagonal() * (eig.vectors.adjoint() * s0);
        }
        CVector out = CVector::Zero(3);
        for (int j = 0; j < 3; ++j) {
            out += std::exp(kI * roots[j] * t) * (residues[j] * s0);
        }
        return out;
    }
};

}  // namespace

LambdaState propagate(const LambdaConfig& c, const LambdaState& s0, double t, bool* used_fallback) {
    const LambdaPropagator prop(c);
    if (used_fallback != nullptr) {
        *used_fallback = prop.fallback;
    }
    return LambdaState::from_vector(prop.apply(s0.vector(), t));
}

std::vector<Populations> populations(const LambdaConfig& c, const LambdaState& s0, const std::vector<double>& times) {
    const LambdaPropagator prop(c);
    const CVector v0 = s0.vector();
    std::vector<Populations> out;
    out.reserve(times.size());
    for (double t : times) {
        const CVector v = prop.apply(v0, t);
        out.push_back({std::norm(v(0)), std::norm(v(1)), std::norm(v(2))});
    }
    return out;
}

ChevronDataset chevron_landscape(const LambdaConfig& base, const std::vector<double>& offsets_hz,
                                 const std::vector<double>& times_s, SweptCoupler swept, unsigned threads) {
    auto monotone = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (!(v[i] > v[i - 1])) {
                return false;
            }
        }
        return true;
    };
    if (!monotone(offsets_hz) || !monotone(times_s)) {
        throw std::invalid_argument("chevron_landscape: sweep axes must be strictly increasing");
    }
    ChevronDataset ds;
    ds.offsets_hz = offsets_hz;
    ds.times_s = times_s;
    ds.swept = swept;
    ds.populations.resize(offsets_hz.size() * times_s.size());
    parallel_for(offsets_hz.size(), threads, [&](std::size_t i) {
        LambdaConfig c = base;
        const double shift = 2 * kPi * offsets_hz[i];
        if (swept == SweptCoupler::First) {
            c.delta1 += shift;
        } else {
            c.delta3 += shift;
        }
        const auto rows = populations(c, LambdaState{}, times_s);
        std::copy(rows.begin(), rows.end(), ds.populations.begin() + i * times_s.size());
    });
    return ds;
}

namespace {

// Dominant angular frequency of a sampled signal from a dense periodogram.
double dominant_frequency(const std::vector<double>& times, const std::vector<double>& y) {
    const std::size_t n = times.size();
    double mean = 0.0;
    for (double v : y) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    const double span = times.back() - times.front();
    double min_dt = span;
    for (std::size_t i = 1; i < n; ++i) {
        min_dt = std::min(min_dt, times[i] - times[i - 1]);
    }
    const double w_max = kPi / min_dt;
    const double w_min = kPi / span;
    const int grid = 4000;
    double best_w = 0.0;
    double best_power = -1.0;
    for (int k = 0; k <= grid; ++k) {
        const double w = w_min + (w_max - w_min) * k / grid;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            re += (y[i] - mean) * std::cos(w * times[i]);
            im += (y[i] - mean) * std::sin(w * times[i]);
        }
        const double power = re * re + im * im;
        if (power > best_power) {
            best_power = power;
            best_w = w;
        }
    }
    return best_w;
}

}  // namespace

LambdaFit fit_lambda_model(const std::vector<double>& times, const std::vector<Populations>& data,
                           std::optional<LambdaConfig> guess) {
    if (times.size() != data.size() || times.size() < 8) {
        throw std::invalid_argument("fit_lambda_model: need at least 8 matching samples");
    }
    LambdaFit fit;
    double lo = 1.0;
    double hi = 0.0;
    for (const auto& row : data) {
        lo = std::min(lo, row[0]);
        hi = std::max(hi, row[0]);
    }
    if (hi - lo < 1e-6) {
        // No oscillation to fit.
        fit.converged = false;
        fit.residual = 0.0;
        return fit;
    }

    std::vector<double> p1(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        p1[i] = data[i][0];
    }
    const double w_peak = dominant_frequency(times, p1);
    const double unit = guess ? std::sqrt(cubic_params(*guess).p) : w_peak;
    if (!(unit > 0)) {
        fit.converged = false;
        return fit;
    }

    // Fits on a growing prefix of the series: about two dominant periods
    // first, then doubling. Long records otherwise trap the simplex in
    // phase-wrapped minima.
    std::size_t used = times.size();
    auto objective = [&](const std::vector<double>& x) {
        LambdaConfig c{x[0] * unit, x[1] * unit, x[2] * unit, x[3] * unit};
        const std::vector<double> t(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(used));
        const auto model = populations(c, LambdaState{}, t);
        double s = 0.0;
        for (std::size_t i = 0; i < model.size(); ++i) {
            for (int k = 0; k < 3; ++k) {
                const double r = model[i][k] - data[i][k];
                s += r * r;
            }
        }
        return s;
    };

    std::vector<std::size_t> windows;
    {
        const double first = times.front() + 2 * 2 * kPi / w_peak;
        std::size_t m = 0;
        while (m < times.size() && times[m] <= first) {
            ++m;
        }
        m = std::max<std::size_t>(m, 16);
        while (m < times.size()) {
            windows.push_back(m);
            m *= 2;
        }
        windows.push_back(times.size());
    }

    std::vector<std::vector<double>> seeds;
    if (guess) {
        seeds.push_back({std::abs(guess->g1) / unit, std::abs(guess->g3) / unit, guess->delta1 / unit,
                         guess->delta3 / unit});
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (double w : {1.0, 0.5, 2.0}) {
        for (double ratio : {1.0, 0.6, 1.0 / 0.6}) {
            for (auto [d1, d3] : std::initializer_list<std::pair<double, double>>{
                     {0.0, 0.0}, {0.2, 0.2}, {-0.2, -0.2}, {0.5, 0.3}, {0.3, 0.5}, {0.5, -0.3}}) {
                const double a1 = w * inv_sqrt2 * std::sqrt(2 / (1 + ratio * ratio));
                seeds.push_back({a1, a1 * ratio, d1, d3});
            }
        }
    }

    MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    int total_iter = 0;
    used = windows.front();
    for (const auto& s : seeds) {
        auto r = nelder_mead(objective, s, {0.1, 0.1, 0.1, 0.1}, 10000, 1e-12, 1e-16, 200);
        total_iter += r.iterations;
        if (r.value < best.value) {
            best = r;
        }
    }
    for (std::size_t w = 0; w < windows.size(); ++w) {
        used = windows[w];
        if (w > 0) {
            best.value = objective(best.x);
        }
        // Restart from the best point to escape a collapsed simplex.
        for (double step : {0.05, 0.01}) {
            auto polish = nelder_mead(objective, best.x, {step, step, step, step}, 10000, 1e-13, 1e-16, 200);
            total_iter += polish.iterations;
            if (polish.value <= best.value) {
                best = polish;
            }
        }
    }

    fit.g1 = std::abs(best.x[0]) * unit;
    fit.g3 = std::abs(best.x[1]) * unit;
    fit.delta1 = best.x[2] * unit;
    fit.delta3 = best.x[3] * unit;
    if (fit.delta1 < 0 || (fit.delta1 == 0 && fit.delta3 < 0)) {
        fit.delta1 = -fit.delta1;
        fit.delta3 = -fit.delta3;
    }
    fit.residual = std::sqrt(best.value / (3.0 * static_cast<double>(times.size())));
    fit.converged = best.converged;
    fit.iterations = total_iter;
    return fit;
}

}  // namespace cczs
