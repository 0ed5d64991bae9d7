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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lqfetch/error.hpp"
#include "lqfetch/operator_algebra.hpp"
#include "test_util.hpp"

namespace lqfetch {
namespace {

using testing::uniform;
using testing::uniform_int;

const Complex I(0, 1);

ComplexMatrix diag(std::vector<Complex> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

TEST(SingleSpinRotation, ZPiIsDiagonalPhase) {
    const auto u = single_spin_rotation(0, Axis::z, Angle::radians(kPi), 1);
    EXPECT_LE(u.max_abs_diff(diag({std::exp(-I * kPi / 2.0), std::exp(I * kPi / 2.0)})), 1e-15);
}

TEST(SingleSpinRotation, XTwoPiIsMinusIdentity) {
    const auto u = single_spin_rotation(0, Axis::x, Angle::radians(2 * kPi), 1);
    ComplexMatrix minus = ComplexMatrix::identity(2);
    for (Complex &z : minus.data()) z = -z;
    EXPECT_LE(u.max_abs_diff(minus), 1e-15);
}

TEST(SingleSpinRotation, EmbeddedOnSecondQubit) {
    const auto u = single_spin_rotation(1, Axis::y, Angle::radians(kPi / 2), 2);
    const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
    const ComplexMatrix block = ComplexMatrix::from_2x2({c, -s, s, c});
    EXPECT_LE(u.max_abs_diff(kron(ComplexMatrix::identity(2), block)), 1e-15);
}

TEST(SingleSpinRotation, RejectsBadQubit) {
    EXPECT_THROW(single_spin_rotation(3, Axis::x, Angle::degrees(90), 3), IndexError);
}

TEST(SingleSpinRotation, AnglesAddOnSameAxis) {
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = uniform_int(1, 4);
        const std::size_t q = uniform_int(0, static_cast<int>(m) - 1);
        const Axis ax = static_cast<Axis>(uniform_int(0, 2));
        const double a = uniform(-7, 7), b = uniform(-7, 7);
        const auto lhs = single_spin_rotation(q, ax, Angle::radians(a), m) *
                         single_spin_rotation(q, ax, Angle::radians(b), m);
        EXPECT_LE(lhs.max_abs_diff(single_spin_rotation(q, ax, Angle::radians(a + b), m)), 1e-12);
    }
}

TEST(SingleSpinRotation, DistinctQubitsCommute) {
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = uniform_int(2, 4);
        const std::size_t q1 = uniform_int(0, static_cast<int>(m) - 1);
        std::size_t q2 = uniform_int(0, static_cast<int>(m) - 1);
        if (q2 == q1) q2 = (q1 + 1) % m;
        const auto a = single_spin_rotation(q1, static_cast<Axis>(uniform_int(0, 2)), Angle::radians(uniform(-4, 4)), m);
        const auto b = single_spin_rotation(q2, static_cast<Axis>(uniform_int(0, 2)), Angle::radians(uniform(-4, 4)), m);
        EXPECT_LE((a * b).max_abs_diff(b * a), 1e-12);
    }
}

TEST(SpinOperators, PolarizationIdentity) {
    // 2 I^alpha = 1 + 2 I_z
    const auto pa = polarization_operator(1, true, 3);
    const auto pb = polarization_operator(1, false, 3);
    const auto iz = spin_operator(1, Axis::z, 3);
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            const Complex id = r == c ? 1.0 : 0.0;
            EXPECT_NEAR(std::abs(2.0 * pa(r, c) - id - 2.0 * iz(r, c)), 0.0, 1e-15);
            EXPECT_NEAR(std::abs(pa(r, c) + pb(r, c) - id), 0.0, 1e-15);
        }
    }
}

TEST(SpinOperators, CommutatorXYIsIZ) {
    const auto x = spin_operator(0, Axis::x, 1), y = spin_operator(0, Axis::y, 1), z = spin_operator(0, Axis::z, 1);
    ComplexMatrix comm = x * y;
    const ComplexMatrix yx = y * x;
    for (std::size_t k = 0; k < 4; ++k) comm.data()[k] -= yx.data()[k] + I * z.data()[k];
    EXPECT_LE(comm.max_abs_diff(ComplexMatrix(2)), 1e-15);
}

TEST(HadamardLike, ProductFormMatchesClosedForm) {
    const auto h = hadamard_like(0, 1);
    const double r = 1 / std::sqrt(2.0);
    const auto closed = ComplexMatrix::from_2x2({r, r, r, -r});
    EXPECT_LE(distance_up_to_global_phase(h, closed), 1e-12);
    // the product carries -i, not +i
    EXPECT_NEAR(std::abs(h(0, 0) - (-I * r)), 0.0, 1e-15);
    const auto prod = single_spin_rotation(0, Axis::x, Angle::radians(kPi), 1) *
                      single_spin_rotation(0, Axis::y, Angle::radians(kPi / 2), 1);
    EXPECT_LE(h.max_abs_diff(prod), 1e-15);
}

TEST(HadamardLike, InvolutionUpToPhase) {
    for (std::size_t m = 1; m <= 3; ++m) {
        for (std::size_t q = 0; q < m; ++q) {
            const auto h = hadamard_like(q, m);
            EXPECT_LE(distance_up_to_global_phase(h * h, ComplexMatrix::identity(std::size_t{1} << m)), 1e-12);
        }
    }
}

TEST(HadamardLike, ConjugatesZToX) {
    const auto h = hadamard_like(0, 1);
    const auto z2 = spin_operator(0, Axis::z, 1);
    const auto x2 = spin_operator(0, Axis::x, 1);
    const auto conj = h * z2 * h.adjoint();
    EXPECT_LE(conj.max_abs_diff(x2), 1e-15);
}

TEST(ZZEvolution, PiOnTwoQubits) {
    const auto u = zz_evolution(0, 1, Angle::radians(kPi), 2);
    const Complex m = std::exp(-I * kPi / 2.0), p = std::exp(I * kPi / 2.0);
    EXPECT_LE(u.max_abs_diff(diag({m, p, p, m})), 1e-15);
}

TEST(ZZEvolution, ZeroIsIdentityAndAnglesAdd) {
    EXPECT_LE(zz_evolution(0, 2, Angle::radians(0), 3).max_abs_diff(ComplexMatrix::identity(8)), 0.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = uniform(-5, 5), b = uniform(-5, 5);
        const auto lhs = zz_evolution(2, 0, Angle::radians(a), 3) * zz_evolution(2, 0, Angle::radians(b), 3);
        EXPECT_LE(lhs.max_abs_diff(zz_evolution(0, 2, Angle::radians(a + b), 3)), 1e-12);
    }
}

TEST(ZZEvolution, RejectsEqualQubits) {
    EXPECT_THROW(zz_evolution(1, 1, Angle::radians(1), 3), IndexError);
    EXPECT_THROW(zz_evolution(0, 3, Angle::radians(1), 3), IndexError);
}

TEST(ControlledPhase, ThreeControlsActOnlyOnMatchingBranch) {
    const std::vector<Control> ctl = {{1, 1, 1}, {2, 0, 1}, {3, 0, 1}};
    const auto u = controlled_phase_direct(4, 0, ctl, Angle::radians(kPi));
    ASSERT_TRUE(u.is_diagonal(0));
    for (std::size_t b = 0; b < 16; ++b) {
        const std::size_t target = b >> 3;
        const std::size_t rest = b & 7;
        Complex want = 1.0;
        if (rest == 0b100) want = target == 0 ? std::exp(-I * kPi / 2.0) : std::exp(I * kPi / 2.0);
        EXPECT_NEAR(std::abs(u(b, b) - want), 0.0, 1e-15) << b;
    }
}

TEST(ControlledPhase, ZeroControlsIsZRotation) {
    const double th = 0.83;
    const auto u = controlled_phase_direct(3, 1, {}, Angle::radians(th));
    EXPECT_LE(u.max_abs_diff(single_spin_rotation(1, Axis::z, Angle::radians(th), 3)), 1e-15);
}

TEST(ControlledPhase, ZeroAngleIsIdentity) {
    const std::vector<Control> ctl = {{0, 1, -1}, {2, 0, 1}};
    EXPECT_LE(controlled_phase_direct(3, 1, ctl, Angle::radians(0)).max_abs_diff(ComplexMatrix::identity(8)), 0.0);
}

TEST(ControlledPhase, NegativeSignInvertsPolarity) {
    const std::vector<Control> a = {{1, 1, -1}};
    const std::vector<Control> b = {{1, 0, 1}};
    EXPECT_LE(controlled_phase_direct(2, 0, a, Angle::radians(1.3))
                  .max_abs_diff(controlled_phase_direct(2, 0, b, Angle::radians(1.3))),
              1e-15);
}

TEST(ControlledPhase, RejectsClash) {
    const std::vector<Control> ctl = {{0, 1, 1}};
    EXPECT_THROW(controlled_phase_direct(2, 0, ctl, Angle::radians(1)), IndexError);
    const std::vector<Control> dup = {{1, 1, 1}, {1, 0, 1}};
    EXPECT_THROW(controlled_phase_direct(3, 0, dup, Angle::radians(1)), IndexError);
}

TEST(ControlledPhase, DiagonalUnitModulus) {
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = uniform_int(2, 6);
        std::vector<Control> ctl;
        for (std::size_t q = 1; q < m; ++q) {
            if (uniform_int(0, 1)) ctl.push_back({q, uniform_int(0, 1), uniform_int(0, 1) ? 1 : -1});
        }
        const auto d = controlled_phase_diagonal(m, 0, ctl, Angle::radians(uniform(-7, 7)));
        for (const Complex &z : d) EXPECT_NEAR(std::abs(z), 1.0, 1e-14);
    }
}

TEST(GlobalPhase, PhaseIsQuotiented) {
    const auto u = single_spin_rotation(1, Axis::y, Angle::radians(0.7), 3) * hadamard_like(0, 3);
    ComplexMatrix v = u;
    for (Complex &z : v.data()) z *= std::exp(I * kPi / 3.0);
    EXPECT_LE(distance_up_to_global_phase(u, v), 1e-14);
}

TEST(GlobalPhase, DisjointSupportsGiveOne) {
    const auto x = ComplexMatrix::from_2x2({0, 1, 1, 0});
    EXPECT_NEAR(distance_up_to_global_phase(ComplexMatrix::identity(2), x), 1.0, 1e-15);
}

TEST(GlobalPhase, DimensionMismatchThrows) {
    EXPECT_THROW(distance_up_to_global_phase(ComplexMatrix::identity(2), ComplexMatrix::identity(4)),
                 ValidationError);
}

TEST(Constructors, AllUnitary) {
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = uniform_int(2, 5);
        const std::size_t q = uniform_int(0, static_cast<int>(m) - 1);
        const std::size_t q2 = (q + 1) % m;
        EXPECT_LE(unitarity_error(single_spin_rotation(q, static_cast<Axis>(trial % 3), Angle::radians(uniform(-9, 9)), m)), 1e-10);
        EXPECT_LE(unitarity_error(zz_evolution(q, q2, Angle::radians(uniform(-9, 9)), m)), 1e-10);
        EXPECT_LE(unitarity_error(hadamard_like(q, m)), 1e-10);
        const std::vector<Control> ctl = {{q2, trial & 1, 1}};
        EXPECT_LE(unitarity_error(controlled_phase_direct(m, q, ctl, Angle::radians(uniform(-9, 9)))), 1e-10);
    }
}

TEST(ComplexMatrix, LocalUpdatesMatchEmbeddedProducts) {
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = uniform_int(1, 5);
        const std::size_t dim = std::size_t{1} << m;
        const std::size_t q = uniform_int(0, static_cast<int>(m) - 1);
        const Matrix2 g = {testing::random_complex(), testing::random_complex(), testing::random_complex(),
                           testing::random_complex()};
        const ComplexMatrix a = testing::random_matrix(dim);
        ComplexMatrix left = a, right = a;
        left.apply_left(q, g);
        right.apply_right(q, g);
        EXPECT_LE(left.max_abs_diff(embed(g, q, m) * a), 1e-13);
        EXPECT_LE(right.max_abs_diff(a * embed(g, q, m)), 1e-13);
    }
}

TEST(ComplexMatrix, KronOrderPutsFirstFactorOnQubitZero) {
    const auto z = ComplexMatrix::from_2x2(spin_half(Axis::z));
    const auto k = kron(z, ComplexMatrix::identity(2));
    EXPECT_LE(k.max_abs_diff(spin_operator(0, Axis::z, 2)), 0.0);
    EXPECT_EQ(qubit_stride(0, 2), 2u);
}

TEST(ComplexMatrix, RejectsNonPowerOfTwo) { EXPECT_THROW(ComplexMatrix(6), ValidationError); }

TEST(Angle, DegreesRoundTrip) {
    EXPECT_DOUBLE_EQ(Angle::degrees(112.5).rad(), 112.5 * kPi / 180);
    EXPECT_DOUBLE_EQ(Angle::radians(kPi / 2).deg(), 90.0);
}

}  // namespace
}  // namespace lqfetch
