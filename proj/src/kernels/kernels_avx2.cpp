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

// Compiled with -mavx2 -mfma. Nothing in here may run unless
// isa_supported(Isa::Avx2) returned true.

#include <immintrin.h>

#include "cczs/kernels.hpp"

namespace cczs::kernels {
namespace {

// Two complex doubles per register, interleaved (re0, im0, re1, im1).
inline __m256d cmul_pd(__m256d x, __m256d y) {
    const __m256d y_re = _mm256_movedup_pd(y);
    const __m256d y_im = _mm256_permute_pd(y, 0xF);
    const __m256d x_swap = _mm256_permute_pd(x, 0x5);
    return _mm256_fmaddsub_pd(x, y_re, _mm256_mul_pd(x_swap, y_im));
}

void caxpy(std::size_t n, Complex a, const Complex* x, Complex* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const __m256d a_re = _mm256_set1_pd(a.real());
    const __m256d a_im = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        const __m256d x_swap = _mm256_permute_pd(xv, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(xv, a_re, _mm256_mul_pd(x_swap, a_im));
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void cmul(std::size_t n, const Complex* a, const Complex* b, Complex* out) {
    const double* ad = reinterpret_cast<const double*>(a);
    const double* bd = reinterpret_cast<const double*>(b);
    double* od = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d av = _mm256_loadu_pd(ad + 2 * i);
        const __m256d bv = _mm256_loadu_pd(bd + 2 * i);
        _mm256_storeu_pd(od + 2 * i, cmul_pd(av, bv));
    }
    for (; i < n; ++i) {
        out[i] = a[i] * b[i];
    }
}

void csr_matvec(const CsrView& a, const Complex* x, Complex* y) {
    const double* vd = reinterpret_cast<const double*>(a.values);
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t r = 0; r < a.rows; ++r) {
        std::int32_t p = a.row_ptr[r];
        const std::int32_t end = a.row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        for (; p + 2 <= end; p += 2) {
            const __m256d v = _mm256_loadu_pd(vd + 2 * p);
            const __m128d x0 = _mm_loadu_pd(xd + 2 * a.col_idx[p]);
            const __m128d x1 = _mm_loadu_pd(xd + 2 * a.col_idx[p + 1]);
            const __m256d xv = _mm256_insertf128_pd(_mm256_castpd128_pd256(x0), x1, 1);
            acc = _mm256_add_pd(acc, cmul_pd(v, xv));
        }
        __m128d sum = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
        alignas(16) double out[2];
        _mm_store_pd(out, sum);
        Complex tail{out[0], out[1]};
        for (; p < end; ++p) {
            tail += a.values[p] * x[a.col_idx[p]];
        }
        y[r] = tail;
    }
}

void cgemm(std::size_t m, std::size_t n, std::size_t k, const Complex* a, std::size_t lda,
           const Complex* b, std::size_t ldb, Complex* c, std::size_t ldc) {
    for (std::size_t j = 0; j < n; ++j) {
        Complex* cj = c + j * ldc;
        for (std::size_t i = 0; i < m; ++i) {
            cj[i] = Complex{0.0, 0.0};
        }
        for (std::size_t p = 0; p < k; ++p) {
            caxpy(m, b[p + j * ldb], a + p * lda, cj);
        }
    }
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{"avx2", &caxpy, &cmul, &csr_matvec, &cgemm};
    return table;
}

}  // namespace cczs::kernels
