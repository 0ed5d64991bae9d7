// Copyright 2026 The lqfetch Authors
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

#include "lqfetch/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define LQFETCH_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define LQFETCH_HAVE_AVX2_TU 0
#endif

#include <algorithm>
#include <cmath>

namespace lqfetch::kernels {

#if LQFETCH_HAVE_AVX2_TU

// The translation unit is compiled with baseline flags; only the functions
// below carry the avx2/fma target so no AVX code leaks into shared inline
// symbols.
#define LQ_AVX2 __attribute__((target("avx2,fma")))

namespace {

constexpr std::size_t kReseedBlock = 64;

// Two complex numbers per register: [re0, im0, re1, im1].
LQ_AVX2 inline __m256d load2(const Complex *p) { return _mm256_loadu_pd(reinterpret_cast<const double *>(p)); }

LQ_AVX2 inline void store2(Complex *p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double *>(p), v); }

LQ_AVX2 inline __m256d broadcast(Complex c) { return _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag()); }

LQ_AVX2 inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d ar = _mm256_movedup_pd(a);
    const __m256d ai = _mm256_permute_pd(a, 0xF);
    const __m256d bs = _mm256_permute_pd(b, 0x5);
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

LQ_AVX2 void cgemm_avx2(std::size_t n, const Complex *a, const Complex *b, Complex *c) {
    if (n % 2 != 0) {
        scalar_kernels().cgemm(n, a, b, c);
        return;
    }
    const __m256d zero = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n; ++i) {
        Complex *crow = c + i * n;
        for (std::size_t j = 0; j < n; j += 2) {
            store2(crow + j, zero);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a[i * n + k];
            if (aik == 0.0) {
                continue;
            }
            const __m256d av = broadcast(aik);
            const Complex *brow = b + k * n;
            for (std::size_t j = 0; j < n; j += 2) {
                store2(crow + j, _mm256_add_pd(load2(crow + j), cmul(av, load2(brow + j))));
            }
        }
    }
}

LQ_AVX2 void apply_pair_rows_avx2(
    std::size_t rows, std::size_t cols, std::size_t stride, const Complex *g, Complex *m) {
    if (cols % 2 != 0) {
        scalar_kernels().apply_pair_rows(rows, cols, stride, g, m);
        return;
    }
    const __m256d g0 = broadcast(g[0]);
    const __m256d g1 = broadcast(g[1]);
    const __m256d g2 = broadcast(g[2]);
    const __m256d g3 = broadcast(g[3]);
    for (std::size_t r = 0; r < rows; ++r) {
        if (r & stride) {
            continue;
        }
        Complex *x = m + r * cols;
        Complex *y = m + (r + stride) * cols;
        for (std::size_t j = 0; j < cols; j += 2) {
            const __m256d xv = load2(x + j);
            const __m256d yv = load2(y + j);
            store2(x + j, _mm256_add_pd(cmul(g0, xv), cmul(g1, yv)));
            store2(y + j, _mm256_add_pd(cmul(g2, xv), cmul(g3, yv)));
        }
    }
}

LQ_AVX2 void apply_pair_cols_avx2(
    std::size_t rows, std::size_t cols, std::size_t stride, const Complex *g, Complex *m) {
    if (stride < 2) {
        scalar_kernels().apply_pair_cols(rows, cols, stride, g, m);
        return;
    }
    const __m256d g0 = broadcast(g[0]);
    const __m256d g1 = broadcast(g[1]);
    const __m256d g2 = broadcast(g[2]);
    const __m256d g3 = broadcast(g[3]);
    for (std::size_t r = 0; r < rows; ++r) {
        Complex *row = m + r * cols;
        for (std::size_t block = 0; block < cols; block += 2 * stride) {
            for (std::size_t off = 0; off < stride; off += 2) {
                Complex *x = row + block + off;
                Complex *y = x + stride;
                const __m256d xv = load2(x);
                const __m256d yv = load2(y);
                store2(x, _mm256_add_pd(cmul(xv, g0), cmul(yv, g2)));
                store2(y, _mm256_add_pd(cmul(xv, g1), cmul(yv, g3)));
            }
        }
    }
}

LQ_AVX2 void scale_rows_cols_avx2(
    std::size_t rows, std::size_t cols, const Complex *left, const Complex *right, Complex *m) {
    if (cols % 2 != 0) {
        scalar_kernels().scale_rows_cols(rows, cols, left, right, m);
        return;
    }
    for (std::size_t i = 0; i < rows; ++i) {
        const __m256d l = broadcast(left[i]);
        Complex *row = m + i * cols;
        for (std::size_t j = 0; j < cols; j += 2) {
            store2(row + j, cmul(cmul(l, load2(row + j)), load2(right + j)));
        }
    }
}

LQ_AVX2 void damped_line_accumulate_avx2(
    std::size_t n, const double *u_re, const double *u_im, Complex q, Complex num, double offset, double *out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d qr = _mm256_set1_pd(q.real());
    const __m256d qi = _mm256_set1_pd(q.imag());
    const __m256d nr = _mm256_set1_pd(num.real());
    const __m256d ni = _mm256_set1_pd(num.imag());
    const __m256d off = _mm256_set1_pd(offset);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d ur = _mm256_loadu_pd(u_re + k);
        const __m256d ui = _mm256_loadu_pd(u_im + k);
        const __m256d dr = _mm256_sub_pd(one, _mm256_fmsub_pd(qr, ur, _mm256_mul_pd(qi, ui)));
        const __m256d di = _mm256_xor_pd(sign, _mm256_fmadd_pd(qr, ui, _mm256_mul_pd(qi, ur)));
        const __m256d numer = _mm256_fmadd_pd(nr, dr, _mm256_mul_pd(ni, di));
        const __m256d denom = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
        const __m256d val = _mm256_sub_pd(_mm256_div_pd(numer, denom), off);
        _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(out + k), val));
    }
    if (k < n) {
        scalar_kernels().damped_line_accumulate(n - k, u_re + k, u_im + k, q, num, offset, out + k);
    }
}

LQ_AVX2 void phasor_accumulate_avx2(std::size_t n, Complex amp, Complex rate, Complex *out) {
    const __m256d step2 = broadcast(std::exp(2.0 * rate));
    std::size_t start = 0;
    for (; start + kReseedBlock <= n; start += kReseedBlock) {
        const Complex p0 = amp * std::exp(rate * static_cast<double>(start));
        const Complex p1 = amp * std::exp(rate * static_cast<double>(start + 1));
        __m256d p = _mm256_setr_pd(p0.real(), p0.imag(), p1.real(), p1.imag());
        for (std::size_t j = start; j < start + kReseedBlock; j += 2) {
            store2(out + j, _mm256_add_pd(load2(out + j), p));
            p = cmul(p, step2);
        }
    }
    if (start < n) {
        scalar_kernels().phasor_accumulate(
            n - start, amp * std::exp(rate * static_cast<double>(start)), rate, out + start);
    }
}

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const KernelTable *avx2_kernels() {
    static const bool supported = cpu_has_avx2();
    static const KernelTable table{
        Isa::avx2,
        "avx2",
        cgemm_avx2,
        apply_pair_rows_avx2,
        apply_pair_cols_avx2,
        scale_rows_cols_avx2,
        damped_line_accumulate_avx2,
        phasor_accumulate_avx2,
    };
    return supported ? &table : nullptr;
}

#else

const KernelTable *avx2_kernels() { return nullptr; }

#endif

}  // namespace lqfetch::kernels
