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

#include "lqfetch/ensemble_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "lqfetch/error.hpp"

namespace lqfetch {
namespace {

constexpr double kMonomialTol = 1e-10;

// Returns, for each column, the row holding its single nonzero entry, if U is
// a phased permutation.
std::optional<std::vector<std::size_t>> monomial_rows(const ComplexMatrix &u) {
    const std::size_t dim = u.dim();
    std::vector<std::size_t> row_of(dim, dim);
    std::vector<bool> used(dim, false);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < dim; ++r) {
            if (std::abs(u(r, c)) <= kMonomialTol) {
                continue;
            }
            if (row_of[c] != dim || used[r]) {
                return std::nullopt;
            }
            row_of[c] = r;
            used[r] = true;
        }
        if (row_of[c] == dim) {
            return std::nullopt;
        }
    }
    return row_of;
}

}  // namespace

DensityState DensityState::from_populations(std::vector<double> populations, bool deviation) {
    if (populations.empty() || !std::has_single_bit(populations.size()) || populations.size() < 2) {
        throw ValidationError("population vector length must be a power of two >= 2");
    }
    DensityState s;
    s.populations_ = std::move(populations);
    s.deviation_ = deviation;
    return s;
}

DensityState DensityState::from_matrix(ComplexMatrix rho, bool deviation) {
    if (rho.dim() < 2) {
        throw ValidationError("density matrix must act on at least one qubit");
    }
    DensityState s;
    s.matrix_ = std::move(rho);
    s.deviation_ = deviation;
    return s;
}

std::size_t DensityState::dim() const { return matrix_ ? matrix_->dim() : populations_.size(); }

std::size_t DensityState::num_qubits() const { return static_cast<std::size_t>(std::countr_zero(dim())); }

std::vector<double> DensityState::populations() const {
    if (!matrix_) {
        return populations_;
    }
    std::vector<double> p(matrix_->dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = (*matrix_)(i, i).real();
    }
    return p;
}

double DensityState::population(std::size_t index) const {
    return matrix_ ? (*matrix_)(index, index).real() : populations_.at(index);
}

const ComplexMatrix &DensityState::matrix() const {
    if (!matrix_) {
        throw ValidationError("state is stored as populations; call to_dense()");
    }
    return *matrix_;
}

ComplexMatrix DensityState::to_dense() const {
    if (matrix_) {
        return *matrix_;
    }
    ComplexMatrix m(populations_.size());
    for (std::size_t i = 0; i < populations_.size(); ++i) {
        m(i, i) = populations_[i];
    }
    return m;
}

DensityState DensityState::to_diagonal(double tol) const {
    if (!matrix_) {
        return *this;
    }
    double worst = 0.0;
    const std::size_t dim = matrix_->dim();
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if (r != c) {
                worst = std::max(worst, std::abs((*matrix_)(r, c)));
            }
        }
    }
    if (worst > tol) {
        throw NumericalError(fmt::format("state has residual coherence {:.3e} above {:.3e}", worst, tol));
    }
    return from_populations(populations(), deviation_);
}

DensityState DensityState::deviation_part() const {
    const double shift = trace() / static_cast<double>(dim());
    if (!matrix_) {
        std::vector<double> p = populations_;
        for (double &v : p) {
            v -= shift;
        }
        return from_populations(std::move(p), true);
    }
    ComplexMatrix m = *matrix_;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        m(i, i) -= shift;
    }
    return from_matrix(std::move(m), true);
}

double DensityState::trace() const {
    double t = 0.0;
    for (double p : populations()) {
        t += p;
    }
    return t;
}

double DensityState::purity() const {
    if (!matrix_) {
        double s = 0.0;
        for (double p : populations_) {
            s += p * p;
        }
        return s;
    }
    double s = 0.0;
    for (const Complex &z : matrix_->data()) {
        s += std::norm(z);  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    }
    return s;
}

double DensityState::hermiticity_error() const {
    if (!matrix_) {
        return 0.0;
    }
    const std::size_t dim = matrix_->dim();
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            worst = std::max(worst, std::abs((*matrix_)(r, c) - std::conj((*matrix_)(c, r))));
        }
    }
    return worst;
}

DensityState effective_pure_ancilla(const SpinSystem &sys) {
    const std::size_t n = sys.num_db_qubits();
    if (n + 1 > 40) {
        throw ValidationError("effective_pure_ancilla: use sparse populations beyond 40 qubits");
    }
    const std::size_t items = std::size_t{1} << n;
    std::vector<double> p(2 * items, 0.0);
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(items), 1.0 / static_cast<double>(items));
    return DensityState::from_populations(std::move(p));
}

DensityState thermal_state(const SpinSystem &sys, double polarization) {
    if (!(polarization >= 0.0) || !(polarization < 1.0)) {
        throw ValidationError("polarization must lie in [0, 1)");
    }
    const std::size_t m = sys.num_spins();
    if (m > 40) {
        throw ValidationError("thermal_state: register too large for population storage");
    }
    double total_gamma = 0.0;
    for (const Spin &s : sys.spins()) {
        total_gamma += s.gamma_rel;
    }
    if (polarization * total_gamma > 1.0) {
        throw ValidationError(fmt::format(
            "polarization {} too large: populations would go negative (limit {:.4g})", polarization, 1.0 / total_gamma));
    }
    const std::size_t dim = std::size_t{1} << m;
    const double norm = 1.0 / static_cast<double>(dim);
    std::vector<double> p(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        double dev = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double sz = (b & qubit_stride(i, m)) ? -1.0 : 1.0;
            dev += polarization * sys.spin(i).gamma_rel * sz;
        }
        p[b] = norm * (1.0 - dev);
    }
    return DensityState::from_populations(std::move(p));
}

DensityState apply_unitary(const DensityState &state, const ComplexMatrix &u) {
    if (u.dim() != state.dim()) {
        throw ValidationError(fmt::format("apply_unitary: state dim {} vs unitary dim {}", state.dim(), u.dim()));
    }
    if (state.is_diagonal()) {
        if (const auto rows = monomial_rows(u)) {
            const std::vector<double> p = state.populations();
            std::vector<double> out(p.size(), 0.0);
            for (std::size_t c = 0; c < p.size(); ++c) {
                const std::size_t r = (*rows)[c];
                out[r] += std::norm(u(r, c)) * p[c];
            }
            return DensityState::from_populations(std::move(out), state.deviation());
        }
    }
    const ComplexMatrix rho = state.to_dense();
    ComplexMatrix out = u * rho * u.adjoint();
    return DensityState::from_matrix(std::move(out), state.deviation());
}

DensityState apply_query_diagonal(const DensityState &state, const QueryPattern &pattern, const SpinSystem &sys) {
    if (!state.is_diagonal()) {
        throw ValidationError("apply_query_diagonal needs a diagonal state");
    }
    const std::size_t n = sys.num_db_qubits();
    if (pattern.size() != n) {
        throw ValidationError("pattern length does not match the number of database qubits");
    }
    if (state.dim() != (std::size_t{2} << n)) {
        throw ValidationError("state size does not match the spin system");
    }
    const std::vector<double> p = state.populations();
    const std::size_t items = std::size_t{1} << n;
    std::vector<double> out(p.size());
    for (std::size_t e = 0; e < items; ++e) {
        const bool flip = pattern.matches(sys.engine_to_item(e));
        out[e] = flip ? p[items + e] : p[e];
        out[items + e] = flip ? p[e] : p[items + e];
    }
    return DensityState::from_populations(std::move(out), state.deviation());
}

SparsePopulations apply_query_sparse(
    const SparsePopulations &pops, const QueryPattern &pattern, std::size_t n, std::uint64_t engine_mask) {
    if (n > 62 || pattern.size() != n) {
        throw ValidationError("apply_query_sparse: pattern length must equal n <= 62");
    }
    const std::uint64_t ancilla_bit = std::uint64_t{1} << n;
    SparsePopulations out;
    for (const auto &[index, p] : pops) {
        if (index >= (ancilla_bit << 1)) {
            throw ValidationError("apply_query_sparse: basis index out of range");
        }
        const std::uint64_t engine = index & (ancilla_bit - 1);
        const bool flip = pattern.matches(engine ^ engine_mask);
        out[flip ? (index ^ ancilla_bit) : index] += p;
    }
    return out;
}

std::string populations_csv(const DensityState &state) {
    const std::size_t m = state.num_qubits();
    std::string out = "basis,population\n";
    const std::vector<double> p = state.populations();
    for (std::size_t b = 0; b < p.size(); ++b) {
        std::string label;
        for (std::size_t q = 0; q < m; ++q) {
            label += (b & qubit_stride(q, m)) ? '1' : '0';
            if (q == 0 && m > 1) {
                label += '|';
            }
        }
        out += fmt::format("{},{:.17g}\n", label, p[b]);
    }
    return out;
}

}  // namespace lqfetch
