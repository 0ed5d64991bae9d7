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

// Dense complex-matrix kernel for spin-1/2 registers.
//
// Qubit 0 is the leftmost Kronecker factor, i.e. the most significant bit of
// a basis index. Spin operators are normalized as I_a = sigma_a / 2, and
// |0> is the +1/2 eigenstate of I_z.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lqfetch {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Upper bound on dense register size (4096 x 4096 entries).
inline constexpr std::size_t kMaxDenseQubits = 12;

class Angle {
   public:
    constexpr Angle() = default;

    static constexpr Angle radians(double r) { return Angle(r); }
    static constexpr Angle degrees(double d) { return Angle(d * kPi / 180.0); }

    constexpr double rad() const { return rad_; }
    constexpr double deg() const { return rad_ * 180.0 / kPi; }

    constexpr Angle operator-() const { return Angle(-rad_); }
    constexpr Angle operator+(Angle o) const { return Angle(rad_ + o.rad_); }
    constexpr Angle operator-(Angle o) const { return Angle(rad_ - o.rad_); }
    constexpr Angle operator*(double s) const { return Angle(rad_ * s); }

   private:
    constexpr explicit Angle(double r) : rad_(r) {}
    double rad_ = 0.0;
};

enum class Axis { x, y, z };

using Matrix2 = std::array<Complex, 4>;  // row-major 2x2

class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    /// Zero matrix. dim must be a power of two >= 2 (or 1 for a scalar).
    explicit ComplexMatrix(std::size_t dim);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix from_2x2(const Matrix2 &m);

    std::size_t dim() const { return dim_; }
    std::size_t num_qubits() const;

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix &rhs) const;

    /// In-place m <- G(qubit) * m.
    void apply_left(std::size_t qubit, const Matrix2 &g);
    /// In-place m <- m * G(qubit).
    void apply_right(std::size_t qubit, const Matrix2 &g);
    /// In-place m <- diag(d) * m.
    void apply_diagonal_left(std::span<const Complex> d);
    /// In-place m <- diag(left) * m * diag(right).
    void scale(std::span<const Complex> left, std::span<const Complex> right);

    std::vector<Complex> diagonal() const;
    bool is_diagonal(double tol) const;

    double max_abs_diff(const ComplexMatrix &other) const;

   private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// Embeds a single-qubit operator on `qubit` of an m-qubit register.
ComplexMatrix embed(const Matrix2 &op, std::size_t qubit, std::size_t total_qubits);

/// I_axis = sigma_axis / 2 on one spin.
Matrix2 spin_half(Axis axis);

/// exp(-i angle I_axis) as a 2x2 block.
Matrix2 rotation_2x2(Axis axis, Angle angle);

/// I_axis^qubit embedded in the register.
ComplexMatrix spin_operator(std::size_t qubit, Axis axis, std::size_t total_qubits);

/// I^alpha = (1 + 2 I_z) / 2 or I^beta = (1 - 2 I_z) / 2 on `qubit`.
ComplexMatrix polarization_operator(std::size_t qubit, bool alpha, std::size_t total_qubits);

ComplexMatrix single_spin_rotation(std::size_t qubit, Axis axis, Angle angle, std::size_t total_qubits);

/// exp(-i pi I_x) exp(-i pi/2 I_y) on `qubit`.
ComplexMatrix hadamard_like(std::size_t qubit, std::size_t total_qubits);

/// exp(-i angle 2 I_z^q1 I_z^q2).
ComplexMatrix zz_evolution(std::size_t q1, std::size_t q2, Angle angle, std::size_t total_qubits);

/// One control of a multi-controlled phase: the control is "on" for logical
/// bit `polarity` under the spin-labeling sign `sign` (+1 or -1).
struct Control {
    std::size_t qubit = 0;
    int polarity = 1;
    int sign = 1;
};

/// Diagonal unitary exp(-i angle I_z^target prod_c (1 + s_c (-1)^{i_c} 2 I_z^c) / 2).
ComplexMatrix controlled_phase_direct(
    std::size_t total_qubits, std::size_t target, std::span<const Control> controls, Angle angle);

/// Diagonal of controlled_phase_direct without building the matrix.
std::vector<Complex> controlled_phase_diagonal(
    std::size_t total_qubits, std::size_t target, std::span<const Control> controls, Angle angle);

/// min over phi of max|U - e^{i phi} V|, with phi aligned at V's largest entry.
double distance_up_to_global_phase(const ComplexMatrix &u, const ComplexMatrix &v);

/// max|U^dagger U - I|.
double unitarity_error(const ComplexMatrix &u);

/// Bit of basis index carrying `qubit` (qubit 0 is the most significant).
inline std::size_t qubit_stride(std::size_t qubit, std::size_t total_qubits) {
    return std::size_t{1} << (total_qubits - 1 - qubit);
}

}  // namespace lqfetch
