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

#include <gtest/gtest.h>

#include <random>

#include "cczs/core.hpp"
#include "cczs/device.hpp"
#include "cczs/kernels.hpp"

namespace {

using cczs::kernels::Complex;
using cczs::kernels::KernelTable;

std::vector<Complex> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<Complex> v(n);
    for (auto& x : v) x = {z(rng), z(rng)};
    return v;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

class KernelEquivalence : public ::testing::Test {
   protected:
    void SetUp() override {
        if (!cczs::kernels::isa_supported(cczs::kernels::Isa::Avx2)) {
            GTEST_SKIP() << "AVX2 not available on this host";
        }
    }
    const KernelTable& s = cczs::kernels::scalar_table();
    const KernelTable& v = cczs::kernels::avx2_table();
};

TEST_F(KernelEquivalence, Caxpy) {
    for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 64u, 1001u}) {
        const auto x = random_vector(n, 1);
        auto y1 = random_vector(n, 2);
        auto y2 = y1;
        s.caxpy(n, {0.3, -1.2}, x.data(), y1.data());
        v.caxpy(n, {0.3, -1.2}, x.data(), y2.data());
        EXPECT_LE(max_diff(y1, y2), 1e-13) << n;
    }
}

TEST_F(KernelEquivalence, Cmul) {
    for (std::size_t n : {1u, 5u, 27u, 243u}) {
        const auto a = random_vector(n, 3);
        const auto b = random_vector(n, 4);
        std::vector<Complex> o1(n), o2(n);
        s.cmul(n, a.data(), b.data(), o1.data());
        v.cmul(n, a.data(), b.data(), o2.data());
        EXPECT_LE(max_diff(o1, o2), 1e-13) << n;
    }
}

TEST_F(KernelEquivalence, CsrMatvecOnDeviceHamiltonian) {
    cczs::DeviceParams p;
    p.modes = {{"A", 2 * cczs::kPi * 4.2e9, -2 * cczs::kPi * 0.22e9, 3, false},
               {"C", 2 * cczs::kPi * 8.9e9, -2 * cczs::kPi * 0.15e9, 3, true},
               {"B", 2 * cczs::kPi * 4.7e9, -2 * cczs::kPi * 0.23e9, 3, false}};
    p.couplings = {{0, 1, 2 * cczs::kPi * 55e6}, {1, 2, 2 * cczs::kPi * 54e6}};
    const auto h = cczs::build_hamiltonian_sparse(p, {0.2});
    const auto x = random_vector(h.cols, 5);
    std::vector<Complex> y1(h.rows), y2(h.rows);
    s.csr_matvec(h.view(), x.data(), y1.data());
    v.csr_matvec(h.view(), x.data(), y2.data());
    EXPECT_LE(max_diff(y1, y2), 1e-13 * 2 * cczs::kPi * 1e10);
}

TEST_F(KernelEquivalence, Cgemm) {
    for (auto [m, n, k] : {std::tuple{1, 1, 1}, {3, 5, 2}, {8, 8, 8}, {27, 27, 27}, {64, 13, 31}}) {
        const auto a = random_vector(m * k, 6);
        const auto b = random_vector(k * n, 7);
        std::vector<Complex> c1(m * n), c2(m * n);
        s.cgemm(m, n, k, a.data(), m, b.data(), k, c1.data(), m);
        v.cgemm(m, n, k, a.data(), m, b.data(), k, c2.data(), m);
        EXPECT_LE(max_diff(c1, c2), 1e-12) << m << "x" << n << "x" << k;
    }
}

TEST(Kernels, ScalarCgemmMatchesEigen) {
    const cczs::CMatrix a = cczs::random_hermitian(9, 1);
    const cczs::CMatrix b = cczs::random_unitary(9, 2);
    cczs::CMatrix c(9, 9);
    cczs::kernels::scalar_table().cgemm(9, 9, 9, a.data(), 9, b.data(), 9, c.data(), 9);
    EXPECT_LE((c - a * b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Kernels, ActiveTableIsOneOfTheTwo) {
    const auto& a = cczs::kernels::active();
    EXPECT_TRUE(&a == &cczs::kernels::scalar_table() || &a == &cczs::kernels::avx2_table());
}

}  // namespace
