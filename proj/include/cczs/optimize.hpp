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

#ifndef CCZS_OPTIMIZE_HPP
#define CCZS_OPTIMIZE_HPP

#include <functional>
#include <vector>

namespace cczs {

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;
using Gradient = std::function<double(const std::vector<double>&, std::vector<double>&)>;

/// Derivative-free simplex minimization. Converges when the simplex size
/// drops below size_tol or the best value changes by less than value_tol
/// over `stall` consecutive iterations.
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, std::vector<double> step,
                           int max_iter = 10000, double size_tol = 1e-10, double value_tol = 1e-14,
                           int stall = 200);

/// Quasi-Newton (BFGS) minimization. `fg` returns the value and fills the
/// gradient.
MinimizeResult bfgs(const Gradient& fg, std::vector<double> x0, int max_iter = 5000,
                    double grad_tol = 1e-8, double initial_step = 1e-2);

}  // namespace cczs

#endif
