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

#ifndef CCZS_DEVICE_HPP
#define CCZS_DEVICE_HPP

#include <string>
#include <vector>

#include "cczs/core.hpp"
#include "cczs/kernels.hpp"

namespace cczs {

/// One transmon-like mode: omega a^dag a + (eta/2) a^dag a (a^dag a - 1).
/// For couplers omega is the frequency at zero flux bias.
struct Mode {
    std::string name;
    double omega = 0.0;  // rad/s
    double eta = 0.0;    // rad/s, negative for transmons
    int levels = 3;
    bool coupler = false;
};

/// J (a^dag + a)(b^dag + b) between modes a and b.
struct Coupling {
    int a = 0;
    int b = 0;
    double j = 0.0;  // rad/s
};

struct DeviceParams {
    std::vector<Mode> modes;
    std::vector<Coupling> couplings;

    HilbertDims dims() const;
    int mode_index(const std::string& name) const;
    std::vector<int> coupler_indices() const;
    void validate() const;

    /// Keep only the named modes (and couplings among them), in the given order.
    DeviceParams subset(const std::vector<std::string>& names) const;

    /// Flat basis index of a Fock configuration given as name -> occupation;
    /// unlisted modes are in 0.
    int basis_index(const std::vector<std::pair<std::string, int>>& occupation) const;
};

/// omega_c0 * sqrt(|cos(pi Phi)|), Phi in flux quanta.
double coupler_frequency(double omega_c0, double flux);

/// Static Hamiltonian with each coupler at the given flux (one value per
/// coupler, in coupler order). Dense; use build_hamiltonian_sparse for evolution.
CMatrix build_hamiltonian(const DeviceParams& p, const std::vector<double>& flux);
kernels::CsrMatrix build_hamiltonian_sparse(const DeviceParams& p, const std::vector<double>& flux);

/// Phi(t) = bias + Omega(t) cos(omega_d t + phase), Omega(t) with cosine rise
/// and fall around a flat top.
struct FluxPulse {
    double bias = 0.0;       // flux quanta
    double amplitude = 0.0;  // flux quanta
    double omega_d = 0.0;    // rad/s
    double phase = 0.0;
    double rise = 25e-9;
    double fall = 25e-9;
    double flat = 0.0;

    double duration() const { return rise + flat + fall; }
    double envelope(double t) const;
    double flux(double t) const;
    void validate() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CVector> states;
    int steps = 0;
    double dt = 0.0;
    double max_norm_drift = 0.0;

    /// |<basis|psi(t)>|^2 for every stored time.
    std::vector<double> population(int basis) const;
};

struct EvolveOptions {
    double samples_per_period = 50.0;  // step <= 1 / (samples_per_period * f_max)
    double norm_tolerance = 1e-6;
    int max_halvings = 4;
};

/// Fixed-step RK4 of the time-dependent Hamiltonian, one pulse per coupler.
/// The diagonal part (bare energies and the flux-modulated coupler
/// frequencies) is integrated exactly as a phase; RK4 acts on the exchange
/// couplings in that frame. Returned states are in the lab frame.
Trajectory evolve_device(const DeviceParams& p, const std::vector<FluxPulse>& pulses, const CVector& psi0,
                         const std::vector<double>& times, const EvolveOptions& options = {});

struct EffectiveCouplingFit {
    double j_eff = 0.0;      // rad/s; a two-state CZ takes pi / j_eff
    double amplitude = 0.0;  // A in A sin^2(Lambda (t - t0))
    double lambda = 0.0;     // rad/s
    double t0 = 0.0;
    double residual = 0.0;   // rms
};

/// Fit P(t) = A sin^2(Lambda (t - t0)) to a target-state population and return
/// J = Lambda sqrt(A). Throws NumericalError when no oscillation is present.
EffectiveCouplingFit extract_effective_coupling(const std::vector<double>& times,
                                                const std::vector<double>& population);

/// Energy difference E(b) - E(a) of the dressed states with the largest
/// overlap on bare basis states a and b, at static flux.
double dressed_transition(const DeviceParams& p, const std::vector<double>& flux, int a, int b);

struct ParametricCalibration {
    double omega_d = 0.0;   // rad/s
    double j_eff = 0.0;     // rad/s
    double transfer = 0.0;  // fitted A at omega_d
    int evaluations = 0;
};

/// Tunes the drive frequency of pulses[slot] (square envelope, amplitude as
/// given) to maximize the fitted a -> b transfer. Starts at the static dressed
/// transition, climbs in steps of `step` and finishes with a parabolic peak
/// estimate. Other pulses are applied as given.
ParametricCalibration calibrate_parametric_drive(const DeviceParams& p, std::vector<FluxPulse> pulses,
                                                 std::size_t slot, int a, int b, double window,
                                                 double step = 2 * kPi * 0.5e6);

}  // namespace cczs

#endif
