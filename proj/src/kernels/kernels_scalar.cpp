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

#include "cczs/kernels.hpp"

namespace cczs::kernels {
namespace {

void caxpy(std::size_t n, Complex a, const Complex* x, Complex* y) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

void cmul(std::size_t n, const Complex* a, const Complex* b, Complex* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i] * b[i];
    }
}

void csr_matvec(const CsrView& a, const Complex* x, Complex* y) {
    for (std::size_t r = 0; r < a.rows; ++r) {
        Complex acc{0.0, 0.0};
        for (std::int32_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
            acc += a.values[p] * x[a.col_idx[p]];
        }
        y[r] = acc;
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
            const Complex bpj = b[p + j * ldb];
            const Complex* ap = a + p * lda;
            for (std::size_t i = 0; i < m; ++i) {
                cj[i] += bpj * ap[i];
            }
        }
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", &caxpy, &cmul, &csr_matvec, &cgemm};
    return table;
}

}  // namespace cczs::kernels
