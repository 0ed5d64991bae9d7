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

#include "lqfetch/operator_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "lqfetch/error.hpp"
#include "lqfetch/kernels/kernels.hpp"

namespace lqfetch {
namespace {

void check_qubit(std::size_t qubit, std::size_t total_qubits) {
    if (qubit >= total_qubits) {
        throw IndexError("qubit " + std::to_string(qubit) + " out of range for " + std::to_string(total_qubits) +
                         "-qubit register");
    }
}

void check_register(std::size_t total_qubits) {
    if (total_qubits == 0 || total_qubits > kMaxDenseQubits) {
        throw IndexError("dense register size " + std::to_string(total_qubits) + " outside [1, " +
                         std::to_string(kMaxDenseQubits) + "]");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw ValidationError("matrix dimension must be a power of two, got " + std::to_string(dim));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::from_2x2(const Matrix2 &g) {
    ComplexMatrix m(2);
    std::copy(g.begin(), g.end(), m.data_.begin());
    return m;
}

std::size_t ComplexMatrix::num_qubits() const { return static_cast<std::size_t>(std::countr_zero(dim_)); }

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &rhs) const {
    if (rhs.dim_ != dim_) {
        throw ValidationError("matrix product dimension mismatch");
    }
    ComplexMatrix out(dim_);
    kernels::active().cgemm(dim_, data_.data(), rhs.data_.data(), out.data_.data());
    return out;
}

void ComplexMatrix::apply_left(std::size_t qubit, const Matrix2 &g) {
    const std::size_t m = num_qubits();
    check_qubit(qubit, m);
    kernels::active().apply_pair_rows(dim_, dim_, qubit_stride(qubit, m), g.data(), data_.data());
}

void ComplexMatrix::apply_right(std::size_t qubit, const Matrix2 &g) {
    const std::size_t m = num_qubits();
    check_qubit(qubit, m);
    kernels::active().apply_pair_cols(dim_, dim_, qubit_stride(qubit, m), g.data(), data_.data());
}

void ComplexMatrix::apply_diagonal_left(std::span<const Complex> d) {
    const std::vector<Complex> ones(dim_, Complex{1.0});
    scale(d, ones);
}

void ComplexMatrix::scale(std::span<const Complex> left, std::span<const Complex> right) {
    if (left.size() != dim_ || right.size() != dim_) {
        throw ValidationError("diagonal scaling dimension mismatch");
    }
    kernels::active().scale_rows_cols(dim_, dim_, left.data(), right.data(), data_.data());
}

std::vector<Complex> ComplexMatrix::diagonal() const {
    std::vector<Complex> d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        d[i] = (*this)(i, i);
    }
    return d;
}

bool ComplexMatrix::is_diagonal(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            if (r != c && std::abs((*this)(r, c)) > tol) {
                return false;
            }
        }
    }
    return true;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    if (other.dim_ != dim_) {
        throw ValidationError("matrix comparison dimension mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    }
    return worst;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t ar = 0; ar < da; ++ar) {
        for (std::size_t ac = 0; ac < da; ++ac) {
            const Complex s = a(ar, ac);
            if (s == 0.0) {
                continue;
            }
            for (std::size_t br = 0; br < db; ++br) {
                for (std::size_t bc = 0; bc < db; ++bc) {
                    out(ar * db + br, ac * db + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

ComplexMatrix embed(const Matrix2 &op, std::size_t qubit, std::size_t total_qubits) {
    check_register(total_qubits);
    check_qubit(qubit, total_qubits);
    const std::size_t left_dim = std::size_t{1} << qubit;
    const std::size_t right_dim = std::size_t{1} << (total_qubits - qubit - 1);
    ComplexMatrix out = ComplexMatrix::from_2x2(op);
    if (left_dim > 1) {
        out = kron(ComplexMatrix::identity(left_dim), out);
    }
    if (right_dim > 1) {
        out = kron(out, ComplexMatrix::identity(right_dim));
    }
    return out;
}

Matrix2 spin_half(Axis axis) {
    const Complex i{0.0, 1.0};
    switch (axis) {
        case Axis::x:
            return {0.0, 0.5, 0.5, 0.0};
        case Axis::y:
            return {0.0, -0.5 * i, 0.5 * i, 0.0};
        case Axis::z:
            return {0.5, 0.0, 0.0, -0.5};
    }
    return {};
}

Matrix2 rotation_2x2(Axis axis, Angle angle) {
    // exp(-i theta sigma/2) = cos(theta/2) - i sin(theta/2) sigma
    const double c = std::cos(angle.rad() / 2.0);
    const double s = std::sin(angle.rad() / 2.0);
    const Complex i{0.0, 1.0};
    switch (axis) {
        case Axis::x:
            return {c, -i * s, -i * s, c};
        case Axis::y:
            return {c, -s, s, c};
        case Axis::z:
            return {Complex{c, -s}, 0.0, 0.0, Complex{c, s}};
    }
    return {};
}

ComplexMatrix spin_operator(std::size_t qubit, Axis axis, std::size_t total_qubits) {
    return embed(spin_half(axis), qubit, total_qubits);
}

ComplexMatrix polarization_operator(std::size_t qubit, bool alpha, std::size_t total_qubits) {
    return embed(alpha ? Matrix2{1.0, 0.0, 0.0, 0.0} : Matrix2{0.0, 0.0, 0.0, 1.0}, qubit, total_qubits);
}

ComplexMatrix single_spin_rotation(std::size_t qubit, Axis axis, Angle angle, std::size_t total_qubits) {
    return embed(rotation_2x2(axis, angle), qubit, total_qubits);
}

ComplexMatrix hadamard_like(std::size_t qubit, std::size_t total_qubits) {
    return single_spin_rotation(qubit, Axis::x, Angle::radians(kPi), total_qubits) *
           single_spin_rotation(qubit, Axis::y, Angle::radians(kPi / 2.0), total_qubits);
}

ComplexMatrix zz_evolution(std::size_t q1, std::size_t q2, Angle angle, std::size_t total_qubits) {
    check_register(total_qubits);
    check_qubit(q1, total_qubits);
    check_qubit(q2, total_qubits);
    if (q1 == q2) {
        throw IndexError("zz_evolution needs two distinct qubits");
    }
    const std::size_t dim = std::size_t{1} << total_qubits;
    const std::size_t s1 = qubit_stride(q1, total_qubits);
    const std::size_t s2 = qubit_stride(q2, total_qubits);
    ComplexMatrix out(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        // 2 I_z I_z eigenvalue is +1/2 for equal spins, -1/2 otherwise.
        const double zz = (((b & s1) != 0) == ((b & s2) != 0)) ? 0.5 : -0.5;
        out(b, b) = std::polar(1.0, -angle.rad() * zz);
    }
    return out;
}

std::vector<Complex> controlled_phase_diagonal(
    std::size_t total_qubits, std::size_t target, std::span<const Control> controls, Angle angle) {
    check_register(total_qubits);
    check_qubit(target, total_qubits);
    for (std::size_t a = 0; a < controls.size(); ++a) {
        check_qubit(controls[a].qubit, total_qubits);
        if (controls[a].qubit == target) {
            throw IndexError("control qubit coincides with target");
        }
        for (std::size_t b = a + 1; b < controls.size(); ++b) {
            if (controls[a].qubit == controls[b].qubit) {
                throw IndexError("duplicate control qubit");
            }
        }
    }
    const std::size_t dim = std::size_t{1} << total_qubits;
    const std::size_t ts = qubit_stride(target, total_qubits);
    std::vector<Complex> d(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        // Each factor (1 + s (-1)^i 2 I_z) / 2 is a projector with eigenvalue 0 or 1.
        double projector = 1.0;
        for (const Control &c : controls) {
            const double z2 = (b & qubit_stride(c.qubit, total_qubits)) ? -1.0 : 1.0;
            const double sign = static_cast<double>(c.sign) * (c.polarity ? -1.0 : 1.0);
            projector *= (1.0 + sign * z2) / 2.0;
        }
        const double iz = (b & ts) ? -0.5 : 0.5;
        d[b] = std::polar(1.0, -angle.rad() * iz * projector);
    }
    return d;
}

ComplexMatrix controlled_phase_direct(
    std::size_t total_qubits, std::size_t target, std::span<const Control> controls, Angle angle) {
    const std::vector<Complex> d = controlled_phase_diagonal(total_qubits, target, controls, angle);
    ComplexMatrix out(d.size());
    for (std::size_t b = 0; b < d.size(); ++b) {
        out(b, b) = d[b];
    }
    return out;
}

double distance_up_to_global_phase(const ComplexMatrix &u, const ComplexMatrix &v) {
    if (u.dim() != v.dim()) {
        throw ValidationError("distance_up_to_global_phase: dimension mismatch");
    }
    const auto vd = v.data();
    const auto ud = u.data();
    std::size_t pivot = 0;
    for (std::size_t k = 1; k < vd.size(); ++k) {
        if (std::abs(vd[k]) > std::abs(vd[pivot])) {
            pivot = k;
        }
    }
    Complex phase{1.0, 0.0};
    if (std::abs(ud[pivot]) > 0.0 && std::abs(vd[pivot]) > 0.0) {
        const Complex ratio = ud[pivot] / vd[pivot];
        phase = ratio / std::abs(ratio);
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < vd.size(); ++k) {
        worst = std::max(worst, std::abs(ud[k] - phase * vd[k]));
    }
    return worst;
}

double unitarity_error(const ComplexMatrix &u) {
    const ComplexMatrix p = u.adjoint() * u;
    return p.max_abs_diff(ComplexMatrix::identity(u.dim()));
}

}  // namespace lqfetch
