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


#include "lqfetch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "lqfetch/error.hpp"

namespace lqfetch {

namespace {

constexpr double kMonomialTol = 1e-10;
constexpr double kPropagatorTol = 1e-6;

void write_file(const std::filesystem::path &path, const std::string &text, std::vector<std::filesystem::path> &out) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError(fmt::format("cannot write {}", path.string()));
    f << text;
    if (!f) throw ValidationError(fmt::format("write to {} failed", path.string()));
    out.push_back(path);
}

void require_dense(const SpinSystem &sys, Backend b) {
    if (b != Backend::fast_diagonal && sys.num_spins() > kMaxDenseQubits) {
        throw ValidationError(fmt::format("{} backend needs n + 1 <= {}, got {}", backend_name(b), kMaxDenseQubits,
                                          sys.num_spins()));
    }
}

}  // namespace

InitMode parse_init_mode(std::string_view s) {
    if (s == "thermal") return InitMode::thermal;
    if (s == "eps" || s == "effective_pure") return InitMode::effective_pure;
    throw ParseError(fmt::format("unknown init mode '{}'", s));
}

Backend parse_backend(std::string_view s) {
    if (s == "ideal") return Backend::ideal;
    if (s == "hard" || s == "hard_pulse") return Backend::hard_pulse;
    if (s == "fast" || s == "fast_diagonal") return Backend::fast_diagonal;
    throw ParseError(fmt::format("unknown backend '{}'", s));
}

ReadoutMode parse_readout(std::string_view s) {
    if (s == "fid") return ReadoutMode::fid;
    if (s == "analytic") return ReadoutMode::analytic;
    throw ParseError(fmt::format("unknown readout '{}'", s));
}

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::ideal: return "ideal";
        case Backend::hard_pulse: return "hard_pulse";
        case Backend::fast_diagonal: break;
    }
    return "fast_diagonal";
}

std::string_view init_mode_name(InitMode m) { return m == InitMode::thermal ? "thermal" : "effective_pure"; }

EmitFlags EmitFlags::parse(std::string_view list) {
    EmitFlags e;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const std::string_view tok = list.substr(0, comma);
        if (tok == "csv") {
            e.csv = true;
        } else if (tok == "json") {
            e.json = true;
        } else if (tok == "svg") {
            e.svg = true;
        } else if (tok == "seq" || tok == "sequence") {
            e.sequence = true;
        } else if (!tok.empty()) {
            throw ParseError(fmt::format("unknown emit flag '{}'", tok));
        }
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return e;
}

SpinSystem resolve_system(std::string_view source) {
    if (source.empty() || source == "builtin" || source == "crotonic") return crotonic_default();
    return load_spin_system_file(std::filesystem::path(source));
}

DensityState prepare_state(const SpinSystem &sys, InitMode mode, double polarization) {
    return mode == InitMode::thermal ? thermal_state(sys, polarization) : effective_pure_ancilla(sys);
}

QueryOracle::QueryOracle(const SpinSystem &sys, const QueryPattern &pattern, Backend backend)
    : sys_(sys), pattern_(pattern), backend_(backend) {
    require_dense(sys_, backend_);
    sequence_ = build_query_network(sys_, pattern_);
    if (backend_ == Backend::hard_pulse) sequence_ = expand_to_hard_pulses(sequence_, sys_);
}

DensityState QueryOracle::apply(const DensityState &state) {
    ++calls_;
    switch (backend_) {
        case Backend::fast_diagonal:
            return apply_query_diagonal(state, pattern_, sys_);
        case Backend::ideal:
            return apply_unitary(state, ideal_unitary(sequence_));
        case Backend::hard_pulse: {
            ComplexMatrix u = hard_pulse_propagator(sequence_, sys_);
            if (sys_.num_spins() <= 8) {
                const double d = distance_up_to_global_phase(u, ideal_unitary(build_query_network(sys_, pattern_)));
                if (d > kPropagatorTol) {
                    throw NumericalError(fmt::format("hard-pulse propagator deviates from the ideal query by {:.3g}", d));
                }
            }
            return apply_unitary(state, u);
        }
    }
    throw ValidationError("unknown backend");
}

std::vector<std::uint64_t> flipped_items(const DensityState &before, const DensityState &after, const SpinSystem &sys) {
    if (before.num_qubits() != sys.num_spins() || after.num_qubits() != sys.num_spins()) {
        throw ValidationError("state does not match spin system");
    }
    const std::size_t half = before.dim() / 2;
    std::vector<std::uint64_t> out;
    for (std::uint64_t e = 0; e < half; ++e) {
        const double d0 = before.population(e) - before.population(half + e);
        const double d1 = after.population(e) - after.population(half + e);
        if (d0 * d1 < 0) out.push_back(sys.engine_to_item(e));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> classical_oracle(const QueryPattern &pattern, std::size_t n) {
    if (pattern.size() != n) throw ValidationError(fmt::format("pattern has {} bits, expected {}", pattern.size(), n));
    if (n > 30) throw ValidationError("exhaustive enumeration is limited to 30 bits");
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        if (pattern.matches(i)) out.push_back(i);
    }
    return out;
}

namespace {

struct Readout {
    const SpinSystem &sys;
    const RunConfig &cfg;

    // acquire both spectra with a phase taken from the reference
    std::pair<Spectrum, Spectrum> pair(const DensityState &ref, const DensityState *other) const {
        const AcquisitionParams &acq = cfg.acquisition;
        Spectrum a, b;
        if (cfg.readout == ReadoutMode::fid) {
            const auto fid_ref = acquire_fid(ref, sys, acq);
            const double phase = zero_order_phase(fid_ref);
            a = fft_spectrum(fid_ref, acq, phase);
            if (other) b = fft_spectrum(acquire_fid(*other, sys, acq), acq, phase);
        } else {
            a = analytic_spectrum(ref, sys, acq);
            if (other) b = analytic_spectrum(*other, sys, acq);
            const double total = std::accumulate(a.amplitude.begin(), a.amplitude.end(), 0.0);
            if (total < 0) {
                for (double &v : a.amplitude) v = -v;
                for (double &v : b.amplitude) v = -v;
            }
        }
        return {std::move(a), std::move(b)};
    }
};

void check_config(const RunConfig &cfg, const SpinSystem &sys) {
    cfg.acquisition.validate(sys);
    require_dense(sys, cfg.backend);
    if (!(cfg.peak_threshold > 0 && cfg.peak_threshold < 1)) throw ValidationError("peak threshold must be in (0, 1)");
}

}  // namespace

RunResult run_fetch(const RunConfig &cfg) { return run_fetch(cfg, resolve_system(cfg.system)); }

RunResult run_fetch(const RunConfig &cfg, const SpinSystem &sys) {
    check_config(cfg, sys);
    const QueryPattern pattern = QueryPattern::parse(cfg.pattern);
    if (pattern.size() != sys.num_db_qubits()) {
        throw ValidationError(
            fmt::format("pattern has {} bits, system has {} database qubits", pattern.size(), sys.num_db_qubits()));
    }

    QueryOracle oracle(sys, pattern, cfg.backend);
    const DensityState before = prepare_state(sys, cfg.init, cfg.polarization);
    const DensityState after = oracle.apply(before);
    if (oracle.calls() != 1) throw NumericalError("query applied more than once");

    RunResult r(sys);
    r.pattern = pattern;
    r.sequence = oracle.sequence();
    r.report = sequence_report(r.sequence);
    std::tie(r.before, r.after) = Readout{sys, cfg}.pair(before, &after);

    const LineDecoder decoder(sys, cfg.decode_tolerance_hz, cfg.acquisition.carrier_hz);
    r.before_peaks = pick_peaks(r.before, cfg.peak_threshold);
    r.after_peaks = pick_peaks(r.after, cfg.peak_threshold);
    decode_peaks(r.before_peaks, decoder);
    decode_peaks(r.after_peaks, decoder);
    r.classification = classify_marked(r.after_peaks);
    r.marked = r.classification.marked;
    r.expected = classical_oracle(pattern, sys.num_db_qubits());
    r.oracle_calls = oracle.calls();
    r.verified = r.marked == r.expected && r.classification.inconsistent.empty();

    if (!cfg.out_dir.empty() && cfg.emit.any()) {
        std::filesystem::create_directories(cfg.out_dir);
        if (cfg.emit.csv) {
            write_file(cfg.out_dir / "before_spectrum.csv", spectrum_csv(r.before), r.artifacts);
            write_file(cfg.out_dir / "after_spectrum.csv", spectrum_csv(r.after), r.artifacts);
        }
        if (cfg.emit.json) write_file(cfg.out_dir / "peaks.json", peaks_json(r), r.artifacts);
        if (cfg.emit.svg) {
            write_file(cfg.out_dir / "spectrum.svg",
                       spectrum_svg({{"before query", &r.before}, {"after query", &r.after}}), r.artifacts);
        }
        if (cfg.emit.sequence) write_file(cfg.out_dir / "sequence.txt", format_listing(r.sequence), r.artifacts);
    }
    return r;
}

SpectrumResult run_spectrum(const SpinSystem &sys, const RunConfig &cfg) {
    check_config(cfg, sys);
    const DensityState state = prepare_state(sys, cfg.init, cfg.polarization);
    SpectrumResult out;
    out.spectrum = Readout{sys, cfg}.pair(state, nullptr).first;
    out.peaks = pick_peaks(out.spectrum, cfg.peak_threshold);
    decode_peaks(out.peaks, LineDecoder(sys, cfg.decode_tolerance_hz, cfg.acquisition.carrier_hz));
    return out;
}

std::vector<BenchRow> bench_report(int n_bits, double n_marked) {
    if (n_bits < 1 || n_bits > 1000) throw ValidationError("n_bits must be in [1, 1000]");
    const double n = std::ldexp(1.0, n_bits);
    if (!(n_marked >= 1) || n_marked > n || n_marked != std::floor(n_marked)) {
        throw ValidationError("n_marked must be an integer in [1, 2^n_bits]");
    }
    std::vector<BenchRow> rows;
    rows.push_back({"classical", (n + 1) / (n_marked + 1), "expected random probes without replacement"});
    rows.push_back({"grover", std::ceil(kPi / 4 * std::sqrt(n / n_marked)), "ceil(pi/4 sqrt(N/M))"});
    rows.push_back({"bruschweiler", static_cast<double>(n_bits),
                    n_marked == 1 ? "one bisection per bit" : "one bisection per bit, single marked item only"});
    rows.push_back({"ensemble_fetch", 1.0, "single query, all marked items read from one spectrum"});
    return rows;
}

std::string format_bench(const std::vector<BenchRow> &rows, int n_bits, double n_marked) {
    std::string out = fmt::format("N = 2^{} = {:.6g}, M = {:.0f}\n", n_bits, std::ldexp(1.0, n_bits), n_marked);
    out += fmt::format("{:<16} {:>14}  {}\n", "method", "queries", "note");
    for (const BenchRow &r : rows) out += fmt::format("{:<16} {:>14.6g}  {}\n", r.method, r.queries, r.note);
    return out;
}

}  // namespace lqfetch
