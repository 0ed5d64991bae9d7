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

#pragma once

// Data-parallel inner loops shared by the dense simulators and the spectrometer.
//
// Every kernel has a scalar reference implementation. Vector variants are
// selected at runtime from the host CPU features and must agree with the
// scalar path to rounding (see tests/kernels_equivalence_test.cpp).

#include <complex>
#include <cstddef>
#include <string_view>

namespace lqfetch::kernels {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    const char *name;

    // c = a * b for n x n row-major matrices. c must not alias a or b.
    void (*cgemm)(std::size_t n, const Complex *a, const Complex *b, Complex *c);

    // m <- G * m where G acts on the row pair (r, r + stride) for every r with
    // (r & stride) == 0. m is rows x cols, row-major. g is the 2x2 G, row-major.
    void (*apply_pair_rows)(std::size_t rows, std::size_t cols, std::size_t stride, const Complex *g, Complex *m);

    // m <- m * G on column pairs (c, c + stride).
    void (*apply_pair_cols)(std::size_t rows, std::size_t cols, std::size_t stride, const Complex *g, Complex *m);

    // m_ij <- left_i * m_ij * right_j
    void (*scale_rows_cols)(std::size_t rows, std::size_t cols, const Complex *left, const Complex *right, Complex *m);

    // out_k += Re(num / (1 - q * u_k)) - offset, u_k = u_re[k] + i u_im[k].
    // Closed-form finite sum of one damped, sampled exponential on a DFT grid.
    void (*damped_line_accumulate)(
        std::size_t n, const double *u_re, const double *u_im, Complex q, Complex num, double offset, double *out);

    // out_j += amp * exp(rate * j) for j in [0, n).
    void (*phasor_accumulate)(std::size_t n, Complex amp, Complex rate, Complex *out);
};

const KernelTable &scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable *avx2_kernels();

bool available(Isa isa);

/// Table used by the library. Chosen once from CPU features; the environment
/// variable LQFETCH_ISA=scalar|avx2 overrides the choice.
const KernelTable &active();

/// Forces a variant (tests, benchmarking). Throws if unavailable.
void select(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace lqfetch::kernels
