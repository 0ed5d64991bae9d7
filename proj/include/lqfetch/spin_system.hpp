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

// The physical register: spins, scalar couplings, the ancilla and the
// logical-bit convention used to read items off the ancilla spectrum.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lqfetch {

enum class Species { carbon, proton, other };

/// gamma(1H) / gamma(13C) from the CODATA gyromagnetic ratios.
inline constexpr double kProtonGammaRel = 267.52218744 / 67.2828;

struct Spin {
    std::string label;
    Species species = Species::carbon;
    std::string species_name;  // only meaningful for Species::other
    double gamma_rel = 1.0;
    double offset_hz = 0.0;
    int multiplicity = 1;  // magnetically equivalent nuclei behind this qubit

    bool operator==(const Spin &) const = default;
};

/// Register with the ancilla at index 0 and database qubits 1..n.
///
/// Database item i is written with qubit 1 as its most significant bit. The
/// state engine works with physical spin states (bit 0 = spin up); a database
/// qubit whose coupling to the ancilla is negative stores logical 0 as spin
/// down, so item bits and engine bits differ by `engine_mask()`.
class SpinSystem {
   public:
    /// j_hz is a row-major m x m matrix. bit_signs may be empty (derived from
    /// the ancilla couplings) or hold one entry per spin (entry 0 ignored).
    SpinSystem(std::vector<Spin> spins, std::vector<double> j_hz, std::vector<int> bit_signs = {});

    std::size_t num_spins() const { return spins_.size(); }
    std::size_t num_db_qubits() const { return spins_.size() - 1; }
    std::size_t ancilla() const { return 0; }

    const std::vector<Spin> &spins() const { return spins_; }
    const Spin &spin(std::size_t i) const { return spins_.at(i); }
    double j(std::size_t a, std::size_t b) const { return j_hz_.at(a * spins_.size() + b); }
    const std::vector<double> &j_matrix() const { return j_hz_; }

    /// s_i for database qubit i (1-based); index 0 holds +1.
    const std::vector<int> &bit_signs() const { return bit_signs_; }

    /// Item bits whose logical value is stored inverted in the engine basis.
    std::uint64_t engine_mask() const;
    std::uint64_t item_to_engine(std::uint64_t item) const { return item ^ engine_mask(); }
    std::uint64_t engine_to_item(std::uint64_t engine) const { return engine ^ engine_mask(); }

    /// Bit position (within an item) of database qubit q (1-based).
    std::size_t item_bit(std::size_t q) const { return num_db_qubits() - q; }

    std::size_t index_of(std::string_view label) const;

    /// Copy with one coupling replaced (both triangle entries).
    SpinSystem with_coupling(std::size_t a, std::size_t b, double hz) const;

    bool operator==(const SpinSystem &) const = default;

   private:
    std::vector<Spin> spins_;
    std::vector<double> j_hz_;
    std::vector<int> bit_signs_;
};

/// 13C-labeled crotonic acid: ancilla C2, database (H1, C3, C1, H3 methyl, C4, H2).
SpinSystem crotonic_default();

/// Parses the key/value spin-system format documented in docs/spin_system_format.md.
SpinSystem load_spin_system(std::string_view config_text);
SpinSystem load_spin_system_file(const std::filesystem::path &path);

/// Serializes to the same format, so load(save(s)) == s.
std::string save_spin_system(const SpinSystem &sys);

enum class Constraint : std::uint8_t { zero, one, wild };

/// Per-database-qubit constraint; qubit 1 is written leftmost.
class QueryPattern {
   public:
    QueryPattern() = default;
    explicit QueryPattern(std::vector<Constraint> constraints) : constraints_(std::move(constraints)) {}

    /// Parses [01x]{n} (X and * accepted for wildcards).
    static QueryPattern parse(std::string_view text);

    std::size_t size() const { return constraints_.size(); }
    Constraint at(std::size_t q) const { return constraints_.at(q - 1); }  // 1-based
    const std::vector<Constraint> &constraints() const { return constraints_; }

    /// True when no qubit is constrained (matches every item).
    bool unconstrained() const;

    bool matches(std::uint64_t item) const;
    std::string str() const;

   private:
    std::vector<Constraint> constraints_;
};

struct DecodabilityReport {
    bool ok = false;
    bool superincreasing = false;
    /// nu(b) in Hz for every item b, relative to the ancilla carrier.
    std::vector<double> frequencies_hz;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> collisions;
};

/// nu(b) = sum_i (1 - 2 b_i) |J_0i| / 2 for all items; flags pairs closer than resolution_hz.
DecodabilityReport check_decodability(const SpinSystem &sys, double resolution_hz);

}  // namespace lqfetch
