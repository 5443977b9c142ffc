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

#ifndef CCZS_KERNELS_HPP
#define CCZS_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace cczs::kernels {

using Complex = std::complex<double>;

/// Compressed-row view of a complex sparse matrix. Does not own its storage.
struct CsrView {
    std::size_t rows = 0;
    const std::int32_t* row_ptr = nullptr;
    const std::int32_t* col_idx = nullptr;
    const Complex* values = nullptr;
};

/// Owning compressed-row complex matrix.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int32_t> row_ptr;
    std::vector<std::int32_t> col_idx;
    std::vector<Complex> values;

    CsrView view() const { return {rows, row_ptr.data(), col_idx.data(), values.data()}; }
    std::size_t nnz() const { return values.size(); }
};

enum class Isa { Scalar, Avx2 };

/// Data-parallel inner loops used by the time integrators. Every entry has a
/// scalar reference implementation; vector variants must agree with it to
/// rounding.
struct KernelTable {
    const char* name;
    // y += a * x
    void (*caxpy)(std::size_t n, Complex a, const Complex* x, Complex* y);
    // out[i] = a[i] * b[i]
    void (*cmul)(std::size_t n, const Complex* a, const Complex* b, Complex* out);
    // y = A x
    void (*csr_matvec)(const CsrView& a, const Complex* x, Complex* y);
    // C = A * B, all column-major with the given leading dimensions.
    void (*cgemm)(std::size_t m, std::size_t n, std::size_t k, const Complex* a, std::size_t lda,
                  const Complex* b, std::size_t ldb, Complex* c, std::size_t ldc);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();

bool isa_supported(Isa isa);

/// The table selected for this process. Chosen once from CPU features; the
/// environment variable CCZS_ISA=scalar forces the reference kernels.
const KernelTable& active();

}  // namespace cczs::kernels

#endif
