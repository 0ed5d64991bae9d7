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

// Ensemble density operators: preparation, unitary conjugation, and the
// population-level query map that needs no matrices at all.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lqfetch/operator_algebra.hpp"
#include "lqfetch/spin_system.hpp"

namespace lqfetch {

/// Operating-regime polarization of liquid-state NMR.
inline constexpr double kDefaultPolarization = 1e-5;

/// Basis index layout: ancilla bit on top, then the engine bits of the
/// database qubits (see SpinSystem::engine_mask).
class DensityState {
   public:
    enum class Representation { dense, diagonal };

    static DensityState from_populations(std::vector<double> populations, bool deviation = false);
    static DensityState from_matrix(ComplexMatrix rho, bool deviation = false);

    Representation representation() const { return matrix_ ? Representation::dense : Representation::diagonal; }
    bool is_diagonal() const { return !matrix_.has_value(); }
    /// True when the object is the traceless deviation part rather than a density matrix.
    bool deviation() const { return deviation_; }

    std::size_t dim() const;
    std::size_t num_qubits() const;

    /// Diagonal entries (real parts for dense states).
    std::vector<double> populations() const;
    double population(std::size_t index) const;

    /// Throws when the state is diagonal.
    const ComplexMatrix &matrix() const;
    ComplexMatrix to_dense() const;

    /// Drops off-diagonal entries after checking they are below tol.
    DensityState to_diagonal(double tol) const;

    /// rho - Tr(rho)/N.
    DensityState deviation_part() const;

    double trace() const;
    double purity() const;
    double hermiticity_error() const;

   private:
    DensityState() = default;
    std::vector<double> populations_;
    std::optional<ComplexMatrix> matrix_;
    bool deviation_ = false;
};

/// I_0^alpha (x) maximally mixed database, normalized to unit trace.
DensityState effective_pure_ancilla(const SpinSystem &sys);

/// (1/N)(1 - sum_i eps gamma_i sigma_z^i) with sigma_z|0> = +|0>.
DensityState thermal_state(const SpinSystem &sys, double polarization = kDefaultPolarization);

/// U rho U^dagger. A diagonal state stays diagonal when U maps basis states to
/// basis states (up to phases); otherwise it is promoted to dense.
DensityState apply_unitary(const DensityState &state, const ComplexMatrix &u);

/// Moves population from (a, e) to (a xor f(item(e)), e) with f(i) = pattern.matches(i).
DensityState apply_query_diagonal(const DensityState &state, const QueryPattern &pattern, const SpinSystem &sys);

/// Sparse populations keyed by basis index, for registers beyond dense storage.
using SparsePopulations = std::map<std::uint64_t, double>;

/// Same map on sparse populations over n database qubits; engine_mask as in SpinSystem.
SparsePopulations apply_query_sparse(
    const SparsePopulations &pops, const QueryPattern &pattern, std::size_t n, std::uint64_t engine_mask);

/// Debug dump: "basis,population" rows, basis written as ancilla|engine bits.
std::string populations_csv(const DensityState &state);

}  // namespace lqfetch
