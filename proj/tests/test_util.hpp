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

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "lqfetch/operator_algebra.hpp"
#include "lqfetch/spin_system.hpp"

namespace lqfetch::testing {

inline std::mt19937_64 &rng() {
    static std::mt19937_64 r(20260101);
    return r;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Complex random_complex() { return {uniform(-1, 1), uniform(-1, 1)}; }

inline ComplexMatrix random_matrix(std::size_t dim) {
    ComplexMatrix m(dim);
    for (Complex &z : m.data()) z = random_complex();
    return m;
}

/// Fully coupled synthetic register. |J| in [20, 200] Hz with random signs,
/// offsets in [-300, 300] Hz unless zero_offsets.
inline SpinSystem random_system(std::size_t m, bool zero_offsets = false) {
    std::vector<Spin> spins;
    for (std::size_t i = 0; i < m; ++i) {
        Spin s;
        s.label = "S" + std::to_string(i);
        s.offset_hz = zero_offsets ? 0.0 : uniform(-300, 300);
        spins.push_back(s);
    }
    std::vector<double> j(m * m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const double v = uniform(20, 200) * (uniform_int(0, 1) ? 1 : -1);
            j[a * m + b] = j[b * m + a] = v;
        }
    }
    return SpinSystem(spins, j);
}

/// Ancilla plus n database spins coupled only to the ancilla.
inline SpinSystem star_system(const std::vector<double> &j0) {
    const std::size_t m = j0.size() + 1;
    std::vector<Spin> spins;
    for (std::size_t i = 0; i < m; ++i) {
        Spin s;
        s.label = "Q" + std::to_string(i);
        spins.push_back(s);
    }
    std::vector<double> j(m * m, 0.0);
    for (std::size_t q = 1; q < m; ++q) j[q] = j[q * m] = j0[q - 1];
    return SpinSystem(spins, j);
}

inline std::vector<double> random_populations(std::size_t dim) {
    std::vector<double> p(dim);
    double s = 0;
    for (double &v : p) s += (v = uniform(0, 1));
    for (double &v : p) v /= s;
    return p;
}

}  // namespace lqfetch::testing
