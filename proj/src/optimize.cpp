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

#include "cczs/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cczs {
namespace {

struct GslErrorsOff {
    gsl_error_handler_t* previous;
    GslErrorsOff() : previous(gsl_set_error_handler_off()) {}
    ~GslErrorsOff() { gsl_set_error_handler(previous); }
};

std::vector<double> to_std(const gsl_vector* v) {
    std::vector<double> out(v->size);
    for (std::size_t i = 0; i < v->size; ++i) {
        out[i] = gsl_vector_get(v, i);
    }
    return out;
}

double f_trampoline(const gsl_vector* v, void* params) {
    const auto& f = *static_cast<const Objective*>(params);
    const double y = f(to_std(v));
    return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

void fdf_trampoline(const gsl_vector* v, void* params, double* f, gsl_vector* g) {
    const auto& fg = *static_cast<const Gradient*>(params);
    std::vector<double> grad(v->size, 0.0);
    const double y = fg(to_std(v), grad);
    if (f != nullptr) {
        *f = y;
    }
    if (g != nullptr) {
        for (std::size_t i = 0; i < v->size; ++i) {
            gsl_vector_set(g, i, grad[i]);
        }
    }
}

double bfgs_f(const gsl_vector* v, void* params) {
    double y = 0.0;
    fdf_trampoline(v, params, &y, nullptr);
    return y;
}

void bfgs_df(const gsl_vector* v, void* params, gsl_vector* g) {
    fdf_trampoline(v, params, nullptr, g);
}

}  // namespace

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, std::vector<double> step,
                           int max_iter, double size_tol, double value_tol, int stall) {
    const std::size_t n = x0.size();
    if (n == 0 || step.size() != n) {
        throw std::invalid_argument("nelder_mead: bad dimensions");
    }
    GslErrorsOff guard;
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, x0[i]);
        gsl_vector_set(ss, i, step[i]);
    }
    gsl_multimin_function fn{&f_trampoline, n, const_cast<Objective*>(&f)};
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, ss);

    MinimizeResult res;
    double last = s->fval;
    int flat = 0;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) {
            res.converged = true;
            ++it;
            break;
        }
        if (std::abs(last - s->fval) < value_tol) {
            if (++flat >= stall) {
                res.converged = true;
                ++it;
                break;
            }
        } else {
            flat = 0;
        }
        last = s->fval;
    }
    res.x = to_std(s->x);
    res.value = s->fval;
    res.iterations = it;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(ss);
    return res;
}

MinimizeResult bfgs(const Gradient& fg, std::vector<double> x0, int max_iter, double grad_tol,
                    double initial_step) {
    const std::size_t n = x0.size();
    if (n == 0) {
        throw std::invalid_argument("bfgs: empty parameter vector");
    }
    GslErrorsOff guard;
    gsl_vector* x = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, x0[i]);
    }
    gsl_multimin_function_fdf fn{&bfgs_f, &bfgs_df, &fdf_trampoline, n, const_cast<Gradient*>(&fg)};
    gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
    gsl_multimin_fdfminimizer_set(s, &fn, x, initial_step, 0.1);

    MinimizeResult res;
    int it = 0;
    for (; it < max_iter; ++it) {
        const int status = gsl_multimin_fdfminimizer_iterate(s);
        if (gsl_multimin_test_gradient(s->gradient, grad_tol) == GSL_SUCCESS) {
            res.converged = true;
            ++it;
            break;
        }
        if (status != GSL_SUCCESS) {
            // Line search made no progress; restart from the current point once.
            gsl_multimin_fdfminimizer_restart(s);
            if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) {
                break;
            }
        }
    }
    res.x = to_std(s->x);
    res.value = s->f;
    res.iterations = it;
    gsl_multimin_fdfminimizer_free(s);
    gsl_vector_free(x);
    return res;
}

}  // namespace cczs
