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

// Lowering of query networks to gate sequences.
//
// Ideal sequences contain selective pulses, ZZ evolutions and virtual z
// rotations. Hard-pulse sequences replace every ZZ evolution with timed free
// evolution under the always-on coupling Hamiltonian, interleaved with
// refocusing pi pulses.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lqfetch/operator_algebra.hpp"
#include "lqfetch/spin_system.hpp"

namespace lqfetch {

enum class PulseAxis { x, y, minus_x, minus_y };

struct SelectivePulse {
    std::size_t qubit = 0;
    PulseAxis axis = PulseAxis::x;
    Angle angle;
    double duration_s = 0.0;
};

struct ZZEvolution {
    std::size_t q1 = 0;
    std::size_t q2 = 0;
    Angle angle;  // exp(-i angle 2 I_z I_z)
};

/// Software frame update exp(-i angle I_z); never a physical pulse.
struct VirtualZ {
    std::size_t qubit = 0;
    Angle angle;
};

struct Delay {
    double seconds = 0.0;
};

using Gate = std::variant<SelectivePulse, ZZEvolution, VirtualZ, Delay>;

enum class SequenceMode { ideal, hard_pulse };

/// Gates in time order: the first gate acts first.
struct GateSequence {
    SequenceMode mode = SequenceMode::ideal;
    std::size_t num_qubits = 0;
    std::vector<Gate> gates;

    void append(Gate g);
    void append(const GateSequence &other);
};

struct SequenceReport {
    SequenceMode mode = SequenceMode::ideal;
    std::size_t pulses = 0;
    std::size_t zz_evolutions = 0;
    std::size_t virtual_z = 0;
    std::size_t delays = 0;
    double duration_s = 0.0;
    /// Pulse inventory keyed like "180 y" or "90 -x" (angle in degrees, axis).
    std::map<std::string, std::size_t> pulses_by_kind;
};

/// exp(-i angle I_z^target prod_c (1 + s_c (-1)^{i_c} 2 I_z^c) / 2) lowered to
/// one- and two-qubit gates by expanding the multilinear exponent and
/// recursively conjugating with V_n blocks.
GateSequence compile_multilinear_z_phase(
    std::size_t total_qubits, std::size_t target, std::span<const Control> controls, Angle angle);

/// H(ancilla) . controlled R_z(pi) . H(ancilla) over the constrained qubits.
GateSequence build_query_network(const SpinSystem &sys, const QueryPattern &pattern);

struct HardPulseOptions {
    /// Reported duration of each pi / selective pulse; propagation treats pulses as instantaneous.
    double pulse_duration_s = 0.0;
    /// Couplings with |J| below this are treated as absent when choosing the refocusing scheme.
    double coupling_floor_hz = 1e-9;
};

/// Replaces ZZ evolutions by refocused delay blocks under the system's free Hamiltonian.
GateSequence expand_to_hard_pulses(const GateSequence &seq, const SpinSystem &sys, const HardPulseOptions &opts = {});

SequenceReport sequence_report(const GateSequence &seq);

/// Ordered product of the element unitaries of an ideal sequence.
ComplexMatrix ideal_unitary(const GateSequence &seq);

/// Propagator of a hard-pulse sequence: instantaneous pulses interleaved with
/// exp(-i H_free t), H_free = 2 pi sum nu_i I_z^i + 2 pi sum_{i<j} J_ij I_z^i I_z^j.
ComplexMatrix hard_pulse_propagator(const GateSequence &seq, const SpinSystem &sys);

/// Diagonal of exp(-i H_free t).
std::vector<Complex> free_evolution_diagonal(const SpinSystem &sys, double seconds);

/// Dispatches on mode.
ComplexMatrix sequence_unitary(const GateSequence &seq, const SpinSystem &sys);

/// One line per gate followed by a report block.
std::string format_listing(const GateSequence &seq);

}  // namespace lqfetch
