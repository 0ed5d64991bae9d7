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

// End-to-end fetch: prepare, query once, read out, decode, verify.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lqfetch/ensemble_state.hpp"
#include "lqfetch/gate_compiler.hpp"
#include "lqfetch/spectrometer.hpp"
#include "lqfetch/spin_system.hpp"

namespace lqfetch {

enum class InitMode { thermal, effective_pure };
enum class Backend { ideal, hard_pulse, fast_diagonal };
enum class ReadoutMode { fid, analytic };

InitMode parse_init_mode(std::string_view s);   // thermal | eps | effective_pure
Backend parse_backend(std::string_view s);      // ideal | hard | hard_pulse | fast | fast_diagonal
ReadoutMode parse_readout(std::string_view s);  // fid | analytic
std::string_view backend_name(Backend b);
std::string_view init_mode_name(InitMode m);

struct EmitFlags {
    bool csv = false;
    bool json = false;
    bool svg = false;
    bool sequence = false;

    /// Comma-separated subset of csv,json,svg,seq.
    static EmitFlags parse(std::string_view list);
    bool any() const { return csv || json || svg || sequence; }
};

struct RunConfig {
    std::string system = "builtin";  // "builtin" or a config file path
    std::string pattern;
    InitMode init = InitMode::thermal;
    double polarization = kDefaultPolarization;
    Backend backend = Backend::ideal;
    ReadoutMode readout = ReadoutMode::fid;
    AcquisitionParams acquisition;
    double peak_threshold = 0.05;
    double decode_tolerance_hz = 0.3;
    std::filesystem::path out_dir;
    EmitFlags emit;
};

/// "builtin" (or "crotonic") selects the default molecule; anything else is a path.
SpinSystem resolve_system(std::string_view source);

DensityState prepare_state(const SpinSystem &sys, InitMode mode, double polarization = kDefaultPolarization);

/// The query as a black box. Counts applications.
class QueryOracle {
   public:
    QueryOracle(const SpinSystem &sys, const QueryPattern &pattern, Backend backend);

    DensityState apply(const DensityState &state);
    std::size_t calls() const { return calls_; }

    /// Sequence actually executed (hard-pulse expansion for the hard backend).
    const GateSequence &sequence() const { return sequence_; }

   private:
    SpinSystem sys_;
    QueryPattern pattern_;
    Backend backend_;
    GateSequence sequence_;
    std::size_t calls_ = 0;
};

/// Items whose ancilla population difference changed sign between the two states.
std::vector<std::uint64_t> flipped_items(const DensityState &before, const DensityState &after, const SpinSystem &sys);

/// Brute-force list of items matching the pattern.
std::vector<std::uint64_t> classical_oracle(const QueryPattern &pattern, std::size_t n);

struct RunResult {
    explicit RunResult(SpinSystem sys) : system(std::move(sys)) {}

    SpinSystem system;
    QueryPattern pattern;
    GateSequence sequence;
    SequenceReport report;
    Spectrum before;
    Spectrum after;
    std::vector<Peak> before_peaks;
    std::vector<Peak> after_peaks;
    Classification classification;
    std::vector<std::uint64_t> marked;
    std::vector<std::uint64_t> expected;
    std::size_t oracle_calls = 0;
    bool verified = false;
    std::vector<std::filesystem::path> artifacts;
};

RunResult run_fetch(const RunConfig &cfg);
/// Same, with the system given directly (cfg.system is ignored).
RunResult run_fetch(const RunConfig &cfg, const SpinSystem &sys);

/// Pre-query spectrum only. Peaks are decoded.
struct SpectrumResult {
    Spectrum spectrum;
    std::vector<Peak> peaks;
};
SpectrumResult run_spectrum(const SpinSystem &sys, const RunConfig &cfg);

struct BenchRow {
    std::string method;
    double queries = 0.0;
    std::string note;
};

std::vector<BenchRow> bench_report(int n_bits, double n_marked);
std::string format_bench(const std::vector<BenchRow> &rows, int n_bits, double n_marked);

// Artifact text. All output is deterministic for a given input.
std::string spectrum_csv(const Spectrum &spec);
std::string peaks_json(const RunResult &r);
std::string peaks_json(const SpinSystem &sys, const std::vector<Peak> &peaks);
std::string spectrum_svg(const std::vector<std::pair<std::string, const Spectrum *>> &panels);
std::string item_bits(std::uint64_t item, std::size_t n);

}  // namespace lqfetch
