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

#ifndef CCZS_LAMBDA_HPP
#define CCZS_LAMBDA_HPP

#include <array>
#include <optional>
#include <vector>

#include "cczs/core.hpp"

namespace cczs {

/// Driven three-level system
///     [ -d1      g1       0  ]
/// H = [ g1*   d1 - d3     g3 ]
///     [ 0       g3*      d3  ]
/// with psi1 = |110>, psi2 = |200>, psi3 = |101> for the gate.
struct LambdaConfig {
    Complex g1{0.0, 0.0};
    Complex g3{0.0, 0.0};
    double delta1 = 0.0;
    double delta3 = 0.0;
};

struct LambdaState {
    Complex psi1{1.0, 0.0};
    Complex psi2{0.0, 0.0};
    Complex psi3{0.0, 0.0};

    CVector vector() const;
    static LambdaState from_vector(const CVector& v);
    double norm() const;
};

using Populations = std::array<double, 3>;

CMatrix lambda_hamiltonian(const LambdaConfig& c);

struct CubicParams {
    double p;
    double q;
};
CubicParams cubic_params(const LambdaConfig& c);

/// Real roots of -x^3 + p x + q = 0, ascending. The roots are the negated
/// eigenvalues of lambda_hamiltonian.
std::array<double, 3> cubic_roots(double p, double q);

/// Relative root-collision threshold below which propagate switches from the
/// closed form to an eigendecomposition: |3x^2 - p| < kLambdaDegenerateTol * max(1, p).
inline constexpr double kLambdaDegenerateTol = 1e-3;

/// Closed-form evolution exp(-iHt) s0 via the cubic roots. `used_fallback`
/// reports whether the eigendecomposition path was taken.
LambdaState propagate(const LambdaConfig& c, const LambdaState& s0, double t, bool* used_fallback = nullptr);

std::vector<Populations> populations(const LambdaConfig& c, const LambdaState& s0, const std::vector<double>& times);

enum class SweptCoupler { First, Second };

struct ChevronDataset {
    std::vector<double> offsets_hz;
    std::vector<double> times_s;
    SweptCoupler swept = SweptCoupler::First;
    // populations[offset_index * times.size() + time_index]
    std::vector<Populations> populations;

    const Populations& at(std::size_t offset_index, std::size_t time_index) const {
        return populations[offset_index * times_s.size() + time_index];
    }
};

/// Sweep the drive frequency of one coupler while the other is held at its
/// base detuning. An offset of f Hz adds 2*pi*f to the swept matrix detuning
/// (delta1 for the first coupler, delta3 for the second). Starts in psi1.
ChevronDataset chevron_landscape(const LambdaConfig& base, const std::vector<double>& offsets_hz,
                                 const std::vector<double>& times_s, SweptCoupler swept, unsigned threads = 1);

struct LambdaFit {
    double g1 = 0.0;  // |g1|, rad/s
    double g3 = 0.0;  // |g3|, rad/s
    double delta1 = 0.0;
    double delta3 = 0.0;
    double residual = 0.0;  // root-mean-square population error
    bool converged = false;
    int iterations = 0;
};

/// Least-squares fit of |g1|, |g3|, delta1, delta3 to a population time
/// series started in psi1. Populations are invariant under (d1, d3) -> -(d1, d3);
/// the fit reports the representative with delta1 >= 0.
LambdaFit fit_lambda_model(const std::vector<double>& times, const std::vector<Populations>& data,
                           std::optional<LambdaConfig> guess = std::nullopt);

}  // namespace cczs

#endif
