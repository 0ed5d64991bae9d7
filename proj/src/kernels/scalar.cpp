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

#include <cmath>

#include "lqfetch/kernels/kernels.hpp"

namespace lqfetch::kernels {
namespace {

constexpr std::size_t kReseedBlock = 64;

void cgemm_scalar(std::size_t n, const Complex *a, const Complex *b, Complex *c) {
    for (std::size_t i = 0; i < n * n; ++i) {
        c[i] = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Complex *crow = c + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a[i * n + k];
            if (aik == 0.0) {
                continue;
            }
            const Complex *brow = b + k * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
}

void apply_pair_rows_scalar(
    std::size_t rows, std::size_t cols, std::size_t stride, const Complex *g, Complex *m) {
    for (std::size_t r = 0; r < rows; ++r) {
        if (r & stride) {
            continue;
        }
        Complex *x = m + r * cols;
        Complex *y = m + (r + stride) * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            const Complex xv = x[j];
            const Complex yv = y[j];
            x[j] = g[0] * xv + g[1] * yv;
            y[j] = g[2] * xv + g[3] * yv;
        }
    }
}

void apply_pair_cols_scalar(
    std::size_t rows, std::size_t cols, std::size_t stride, const Complex *g, Complex *m) {
    for (std::size_t r = 0; r < rows; ++r) {
        Complex *row = m + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
            if (c & stride) {
                continue;
            }
            const Complex xv = row[c];
            const Complex yv = row[c + stride];
            row[c] = xv * g[0] + yv * g[2];
            row[c + stride] = xv * g[1] + yv * g[3];
        }
    }
}

void scale_rows_cols_scalar(
    std::size_t rows, std::size_t cols, const Complex *left, const Complex *right, Complex *m) {
    for (std::size_t i = 0; i < rows; ++i) {
        Complex *row = m + i * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            row[j] = left[i] * row[j] * right[j];
        }
    }
}

void damped_line_accumulate_scalar(
    std::size_t n, const double *u_re, const double *u_im, Complex q, Complex num, double offset, double *out) {
    for (std::size_t k = 0; k < n; ++k) {
        // d = 1 - q * u_k
        const double dr = 1.0 - (q.real() * u_re[k] - q.imag() * u_im[k]);
        const double di = -(q.real() * u_im[k] + q.imag() * u_re[k]);
        out[k] += (num.real() * dr + num.imag() * di) / (dr * dr + di * di) - offset;
    }
}

void phasor_accumulate_scalar(std::size_t n, Complex amp, Complex rate, Complex *out) {
    const Complex step = std::exp(rate);
    for (std::size_t start = 0; start < n; start += kReseedBlock) {
        Complex p = amp * std::exp(rate * static_cast<double>(start));
        const std::size_t end = std::min(n, start + kReseedBlock);
        for (std::size_t j = start; j < end; ++j) {
            out[j] += p;
            p *= step;
        }
    }
}

}  // namespace

const KernelTable &scalar_kernels() {
    static const KernelTable table{
        Isa::scalar,
        "scalar",
        cgemm_scalar,
        apply_pair_rows_scalar,
        apply_pair_cols_scalar,
        scale_rows_cols_scalar,
        damped_line_accumulate_scalar,
        phasor_accumulate_scalar,
    };
    return table;
}

}  // namespace lqfetch::kernels
