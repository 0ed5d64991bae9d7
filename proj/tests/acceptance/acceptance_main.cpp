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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../test_util.hpp"
#include "lqfetch/ensemble_state.hpp"
#include "lqfetch/error.hpp"
#include "lqfetch/gate_compiler.hpp"
#include "lqfetch/kernels/kernels.hpp"
#include "lqfetch/pipeline.hpp"
#include "lqfetch/spectrometer.hpp"

namespace {

using namespace lqfetch;
using testing::uniform;
using testing::uniform_int;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;  // 0 means none
    std::function<Outcome()> run;
};

double max_abs(const std::vector<double> &v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<Control> random_controls(std::size_t m, std::size_t target, std::size_t k) {
    std::vector<std::size_t> pool;
    for (std::size_t q = 0; q < m; ++q) {
        if (q != target) pool.push_back(q);
    }
    std::shuffle(pool.begin(), pool.end(), testing::rng());
    std::vector<Control> c;
    for (std::size_t i = 0; i < k; ++i) c.push_back({pool[i], uniform_int(0, 1), uniform_int(0, 1) ? 1 : -1});
    return c;
}

Outcome compiler_soundness() {
    double worst = 0;
    int cases = 0;
    for (std::size_t k = 1; k <= 4; ++k) {
        for (int t = 0; t < 30; ++t, ++cases) {
            const std::size_t m = k + 1 + uniform_int(0, 2);
            const std::size_t target = uniform_int(0, static_cast<int>(m) - 1);
            const auto ctl = random_controls(m, target, k);
            const Angle a = Angle::radians(uniform(-2 * kPi, 2 * kPi));
            const auto seq = compile_multilinear_z_phase(m, target, ctl, a);
            worst = std::max(worst, distance_up_to_global_phase(ideal_unitary(seq),
                                                                controlled_phase_direct(m, target, ctl, a)));
        }
    }
    // three controls (1,0,0) on the 7-spin register, angle pi
    const std::vector<Control> three = {{1, 1, 1}, {2, 0, 1}, {3, 0, 1}};
    const Angle pi = Angle::radians(kPi);
    const double d3 = distance_up_to_global_phase(ideal_unitary(compile_multilinear_z_phase(7, 0, three, pi)),
                                                  controlled_phase_direct(7, 0, three, pi));
    ++cases;
    worst = std::max(worst, d3);
    return {worst <= 1e-9, fmt::format("max distance {:.2e} over {} cases (3-control pi case {:.2e})", worst, cases, d3)};
}

Outcome end_to_end() {
    RunConfig c;
    c.pattern = "100xxx";
    c.init = InitMode::thermal;
    c.backend = Backend::ideal;
    const RunResult r = run_fetch(c);
    const std::vector<std::uint64_t> want = {32, 33, 34, 35, 36, 37, 38, 39};
    std::string got;
    for (auto i : r.marked) got += fmt::format("{}{}", got.empty() ? "" : ",", i);
    return {r.marked == want && r.verified && r.oracle_calls == 1,
            fmt::format("marked {{{}}}, oracle calls {}", got, r.oracle_calls)};
}

std::vector<Peak> pre_query_peaks() {
    const SpinSystem sys = crotonic_default();
    return pick_peaks(analytic_spectrum(effective_pure_ancilla(sys), sys, AcquisitionParams{}), 0.05);
}

Outcome spectrum_structure() {
    auto peaks = pre_query_peaks();
    if (peaks.size() != 128) return {false, fmt::format("{} peaks", peaks.size())};
    std::sort(peaks.begin(), peaks.end(), [](const Peak &a, const Peak &b) { return a.freq_hz > b.freq_hz; });
    const double want[] = {133.65, 92.05, 63.95, 22.35, -22.35, -63.95, -92.05, -133.65};
    std::vector<double> c(8);
    double worst = 0;
    for (std::size_t g = 0; g < 8; ++g) {
        // lines sit symmetrically about the group centre; picked heights carry neighbour tails
        double f = 0;
        for (std::size_t i = 16 * g; i < 16 * (g + 1); ++i) f += peaks[i].freq_hz;
        c[g] = f / 16;
        worst = std::max(worst, std::abs(c[g] - want[g]));
    }
    // groups must not interleave
    bool separated = true;
    for (std::size_t g = 0; g + 1 < 8; ++g) separated &= peaks[16 * g + 15].freq_hz > peaks[16 * (g + 1)].freq_hz;
    std::vector<double> gap(7);
    for (std::size_t g = 0; g < 7; ++g) gap[g] = c[g] - c[g + 1];
    const auto largest = std::max_element(gap.begin(), gap.end()) - gap.begin();
    const double smallest = *std::min_element(gap.begin(), gap.end());
    const bool gaps = largest == 3 && std::abs(gap[1] - gap[5]) < 0.02 && gap[1] - smallest < 0.02;
    return {worst <= 0.01 && separated && gaps,
            fmt::format("128 peaks, centroid error {:.2e} Hz, gap(4,5) {:.2f} Hz largest, gap(2,3) {:.2f} = gap(6,7) "
                        "{:.2f} Hz smallest",
                        worst, gap[3], gap[1], gap[5])};
}

Outcome methyl_quartet() {
    const SpinSystem sys = crotonic_default();
    auto peaks = pre_query_peaks();
    decode_peaks(peaks, LineDecoder(sys, 0.3));
    double lo = 1e9, hi = 0;
    for (std::uint64_t item = 0; item < 64; ++item) {
        double inner = 0, outer = 0;
        for (const Peak &p : peaks) {
            if (p.item == item) (p.component == MethylComponent::inner ? inner : outer) = p.amplitude;
        }
        const double r = outer != 0 ? inner / outer : 0;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo >= 3.0 * 0.98 && hi <= 3.0 * 1.02, fmt::format("inner:outer ratio in [{:.4f}, {:.4f}] over 64 items", lo, hi)};
}

Outcome fid_vs_analytic() {
    const SpinSystem sys = crotonic_default();
    const AcquisitionParams p;
    double worst = 0;
    int spectra = 0;
    for (const char *pattern : {"100xxx", "x1x0x1"}) {
        for (bool thermal : {false, true}) {
            const DensityState before = thermal ? thermal_state(sys) : effective_pure_ancilla(sys);
            const DensityState after = apply_query_diagonal(before, QueryPattern::parse(pattern), sys);
            for (const DensityState *s : {&before, &after}) {
                const Spectrum a = analytic_spectrum(*s, sys, p);
                const Spectrum f = fft_spectrum(acquire_fid(*s, sys, p), p);
                double d = 0;
                for (std::size_t k = 0; k < p.n_points; ++k) d = std::max(d, std::abs(a.amplitude[k] - f.amplitude[k]));
                worst = std::max(worst, d / max_abs(a.amplitude));
                ++spectra;
            }
        }
    }
    return {worst <= 1e-6, fmt::format("relative L-inf {:.2e} over {} spectra of {} points", worst, spectra, p.n_points)};
}

Outcome thermal_equivalence() {
    double worst = 1;
    bool same = true;
    for (const char *pattern : {"100xxx", "0x1x0x", "xxxxx1"}) {
        RunConfig c;
        c.pattern = pattern;
        c.init = InitMode::thermal;
        const RunResult t = run_fetch(c);
        c.init = InitMode::effective_pure;
        const RunResult e = run_fetch(c);
        double dot = 0, na = 0, nb = 0;
        for (std::size_t k = 0; k < t.after.amplitude.size(); ++k) {
            dot += t.after.amplitude[k] * e.after.amplitude[k];
            na += t.after.amplitude[k] * t.after.amplitude[k];
            nb += e.after.amplitude[k] * e.after.amplitude[k];
        }
        worst = std::min(worst, dot / std::sqrt(na * nb));
        same &= t.marked == e.marked && t.classification.inconsistent == e.classification.inconsistent;
    }
    return {worst >= 0.999 && same,
            fmt::format("min cosine similarity {:.9f}, classifications {}", worst, same ? "identical" : "differ")};
}

GateSequence random_instance(std::size_t m) {
    GateSequence seq{SequenceMode::ideal, m, {}};
    const int blocks = uniform_int(2, 4);
    for (int b = 0; b < blocks; ++b) {
        switch (uniform_int(0, 2)) {
            case 0: {
                const std::size_t target = uniform_int(0, static_cast<int>(m) - 1);
                const auto ctl = random_controls(m, target, uniform_int(1, static_cast<int>(m) - 1));
                seq.append(compile_multilinear_z_phase(m, target, ctl, Angle::radians(uniform(-kPi, kPi))));
                break;
            }
            case 1: {
                const std::size_t q1 = uniform_int(0, static_cast<int>(m) - 1);
                const std::size_t q2 = (q1 + uniform_int(1, static_cast<int>(m) - 1)) % m;
                seq.append(ZZEvolution{q1, q2, Angle::radians(uniform(-2 * kPi, 2 * kPi))});
                break;
            }
            default:
                seq.append(SelectivePulse{static_cast<std::size_t>(uniform_int(0, static_cast<int>(m) - 1)),
                                          static_cast<PulseAxis>(uniform_int(0, 3)), Angle::degrees(uniform(0, 360)), 0});
                seq.append(VirtualZ{static_cast<std::size_t>(uniform_int(0, static_cast<int>(m) - 1)),
                                    Angle::radians(uniform(-kPi, kPi))});
        }
    }
    return seq;
}

Outcome hard_pulse_backend() {
    double worst = 0;
    int instances = 0;
    for (std::size_t m : {3, 4}) {
        for (int t = 0; t < 12; ++t, ++instances) {
            const SpinSystem sys = testing::random_system(m);
            const GateSequence ideal = random_instance(m);
            const GateSequence hard = expand_to_hard_pulses(ideal, sys);
            worst = std::max(worst, distance_up_to_global_phase(hard_pulse_propagator(hard, sys), ideal_unitary(ideal)));
        }
    }
    return {worst <= 1e-6, fmt::format("max distance {:.2e} over {} random instances on 3 and 4 spins", worst, instances)};
}

Outcome fast_path() {
    double worst = 0;
    int patterns = 0;
    auto check = [&](const SpinSystem &sys, const QueryPattern &q) {
        const std::size_t dim = std::size_t{1} << sys.num_spins();
        const DensityState s = DensityState::from_populations(testing::random_populations(dim));
        const auto fast = apply_query_diagonal(s, q, sys).populations();
        const DensityState dense_in = DensityState::from_matrix(s.to_dense());
        const auto dense = apply_unitary(dense_in, ideal_unitary(build_query_network(sys, q))).populations();
        for (std::size_t i = 0; i < dim; ++i) worst = std::max(worst, std::abs(fast[i] - dense[i]));
        ++patterns;
    };
    const std::vector<double> j0 = {90.0, -40.0, 15.0, -6.0};
    for (std::size_t n = 1; n <= 4; ++n) {
        const SpinSystem sys = testing::star_system(std::vector<double>(j0.begin(), j0.begin() + n));
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::string p;
            for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) p += "01x"[c % 3];
            check(sys, QueryPattern::parse(p));
        }
    }
    const SpinSystem crot = crotonic_default();
    for (int t = 0; t < 50; ++t) {
        std::string p;
        for (int i = 0; i < 6; ++i) p += "01x"[uniform_int(0, 2)];
        check(crot, QueryPattern::parse(p));
    }
    return {worst <= 1e-9, fmt::format("max population difference {:.2e} over {} patterns", worst, patterns)};
}

Outcome monotonic_decode() {
    const SpinSystem sys = crotonic_default();
    auto peaks = pre_query_peaks();
    const LineDecoder dec(sys, 0.3);
    decode_peaks(peaks, dec);
    std::vector<Peak> inner;
    for (const Peak &p : peaks) {
        if (p.component == MethylComponent::inner) inner.push_back(p);
    }
    std::sort(inner.begin(), inner.end(), [](const Peak &a, const Peak &b) { return a.freq_hz > b.freq_hz; });
    bool ordered = inner.size() == 64;
    for (std::size_t i = 0; ordered && i < 64; ++i) ordered = inner[i].item == i;
    int round_trips = 0, failures = 0;
    for (const DecodedLine &l : dec.lines()) {
        try {
            const DecodedLine d = dec.decode(l.expected_hz);
            (d.item == l.item && d.component == l.component) ? ++round_trips : ++failures;
        } catch (const DecodeError &) {
            ++failures;
        }
    }
    for (const Peak &p : peaks) failures += !p.item.has_value();
    return {ordered && failures == 0 && round_trips == 128,
            fmt::format("inner peaks {} in item order, {} lines round-trip, {} failures at 0.3 Hz",
                        ordered ? "are" : "are not", round_trips, failures)};
}

Outcome bench_arithmetic() {
    const auto rows = bench_report(56, 1);
    const double grover = rows[1].queries, target = 0.8 * std::ldexp(1.0, 28);
    const bool ok = std::abs(grover / target - 1) <= 0.1 && rows[2].queries == 56 && rows[3].queries == 1;
    return {ok, fmt::format("grover {:.4g} ({:+.1f}% vs 0.8*2^28), bisection {:.0f}, fetch {:.0f}", grover,
                            100 * (grover / target - 1), rows[2].queries, rows[3].queries)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "compiler soundness", 10, compiler_soundness},
        {2, "end-to-end fetch", 30, end_to_end},
        {3, "spectrum structure", 0, spectrum_structure},
        {4, "methyl quartet", 0, methyl_quartet},
        {5, "FID/FFT vs analytic", 60, fid_vs_analytic},
        {6, "thermal vs effective pure", 0, thermal_equivalence},
        {7, "hard-pulse backend", 30, hard_pulse_backend},
        {8, "fast path vs dense", 0, fast_path},
        {9, "monotonic decode", 0, monotonic_decode},
        {10, "bench arithmetic", 0, bench_arithmetic},
    };
    fmt::print("kernels: {}\n", kernels::isa_name(kernels::active().isa));
    int failed = 0;
    for (const Criterion &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit_s > 0 && secs > c.time_limit_s) {
            o.pass = false;
            o.detail += fmt::format("; over the {:.0f} s limit", c.time_limit_s);
        }
        failed += !o.pass;
        fmt::print("{} {:>2} {}: {} [{:.2f} s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
