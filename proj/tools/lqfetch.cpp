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


// lqfetch: single-query ensemble database search on a simulated NMR register.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lqfetch/error.hpp"
#include "lqfetch/kernels/kernels.hpp"
#include "lqfetch/pipeline.hpp"

namespace {

using namespace lqfetch;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumerical = 4;

struct Options {
    std::string system = "builtin";
    std::string pattern;
    std::string init = "thermal";
    std::string backend = "ideal";
    std::string readout = "fid";
    std::size_t points = AcquisitionParams{}.n_points;
    double dwell = AcquisitionParams{}.dwell_s;
    double t2 = AcquisitionParams{}.t2_s;
    double carrier = 0.0;
    double polarization = kDefaultPolarization;
    double threshold = 0.05;
    double tolerance = 0.3;
    std::string out;
    std::string emit;
    int bits = 56;
    double marked = 1;
};

void add_common(CLI::App *cmd, Options &o) {
    cmd->add_option("--system", o.system, "builtin or spin-system config path");
    cmd->add_option("--init", o.init, "thermal | eps");
    cmd->add_option("--points", o.points, "FID points (power of two)");
    cmd->add_option("--dwell", o.dwell, "dwell time (s)");
    cmd->add_option("--t2", o.t2, "transverse relaxation time (s)");
    cmd->add_option("--carrier", o.carrier, "receiver carrier (Hz)");
    cmd->add_option("--polarization", o.polarization, "thermal polarization");
    cmd->add_option("--readout", o.readout, "fid | analytic");
    cmd->add_option("--threshold", o.threshold, "peak threshold (fraction of max)");
    cmd->add_option("--tolerance", o.tolerance, "decode tolerance (Hz)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--emit", o.emit, "csv,json,svg,seq");
}

RunConfig to_config(const Options &o) {
    RunConfig c;
    c.system = o.system;
    c.pattern = o.pattern;
    c.init = parse_init_mode(o.init);
    c.polarization = o.polarization;
    c.backend = parse_backend(o.backend);
    c.readout = parse_readout(o.readout);
    c.acquisition.n_points = o.points;
    c.acquisition.dwell_s = o.dwell;
    c.acquisition.t2_s = o.t2;
    c.acquisition.carrier_hz = o.carrier;
    c.peak_threshold = o.threshold;
    c.decode_tolerance_hz = o.tolerance;
    c.out_dir = o.out;
    c.emit = EmitFlags::parse(o.emit);
    if (c.emit.any() && c.out_dir.empty()) throw ValidationError("--emit needs --out");
    return c;
}

std::string item_list(const std::vector<std::uint64_t> &items, std::size_t n) {
    std::string s;
    for (std::uint64_t i : items) s += fmt::format("{}{}({})", s.empty() ? "" : " ", i, item_bits(i, n));
    return s.empty() ? "(none)" : s;
}

int cmd_simulate(const Options &o) {
    const RunResult r = run_fetch(to_config(o));
    const std::size_t n = r.system.num_db_qubits();
    fmt::print("pattern      {}\n", r.pattern.str());
    fmt::print("oracle calls {}\n", r.oracle_calls);
    fmt::print("peaks        {} before, {} after\n", r.before_peaks.size(), r.after_peaks.size());
    fmt::print("marked       {}\n", item_list(r.marked, n));
    fmt::print("expected     {}\n", item_list(r.expected, n));
    if (!r.classification.inconsistent.empty()) {
        fmt::print("inconsistent {}\n", item_list(r.classification.inconsistent, n));
    }
    for (const auto &p : r.artifacts) fmt::print("wrote        {}\n", p.string());
    fmt::print("verdict      {}\n", r.verified ? "PASS" : "FAIL");
    return r.verified ? kExitOk : kExitMismatch;
}

int cmd_spectrum(const Options &o) {
    RunConfig cfg = to_config(o);
    const SpinSystem sys = resolve_system(cfg.system);
    const SpectrumResult s = run_spectrum(sys, cfg);
    std::size_t decoded = 0;
    for (const Peak &p : s.peaks) decoded += p.item.has_value();
    fmt::print("{} peaks, {} decoded\n", s.peaks.size(), decoded);
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        auto write = [&](const char *name, const std::string &text) {
            const auto path = cfg.out_dir / name;
            std::FILE *f = std::fopen(path.string().c_str(), "wb");
            if (!f) throw ValidationError(fmt::format("cannot write {}", path.string()));
            std::fwrite(text.data(), 1, text.size(), f);
            std::fclose(f);
            fmt::print("wrote {}\n", path.string());
        };
        if (cfg.emit.csv) write("spectrum.csv", spectrum_csv(s.spectrum));
        if (cfg.emit.json) write("peaks.json", peaks_json(sys, s.peaks));
        if (cfg.emit.svg) write("spectrum.svg", spectrum_svg({{"thermal spectrum", &s.spectrum}}));
    }
    return kExitOk;
}

int cmd_compile(const Options &o) {
    const SpinSystem sys = resolve_system(o.system);
    const QueryPattern pattern = QueryPattern::parse(o.pattern);
    GateSequence seq = build_query_network(sys, pattern);
    if (parse_backend(o.backend) == Backend::hard_pulse) seq = expand_to_hard_pulses(seq, sys);
    const std::string listing = format_listing(seq);
    if (o.out.empty()) {
        fmt::print("{}", listing);
    } else {
        std::filesystem::create_directories(o.out);
        const auto path = std::filesystem::path(o.out) / "sequence.txt";
        std::FILE *f = std::fopen(path.string().c_str(), "wb");
        if (!f) throw ValidationError(fmt::format("cannot write {}", path.string()));
        std::fwrite(listing.data(), 1, listing.size(), f);
        std::fclose(f);
        fmt::print("wrote {}\n", path.string());
    }
    return kExitOk;
}

int cmd_verify(const Options &o) {
    const RunConfig cfg = to_config(o);
    const SpinSystem sys = resolve_system(cfg.system);
    const QueryPattern pattern = QueryPattern::parse(cfg.pattern);
    QueryOracle oracle(sys, pattern, cfg.backend);
    const DensityState before = prepare_state(sys, cfg.init, cfg.polarization);
    const auto got = flipped_items(before, oracle.apply(before), sys);
    const auto want = classical_oracle(pattern, sys.num_db_qubits());
    const std::size_t n = sys.num_db_qubits();
    fmt::print("flipped  {}\nexpected {}\nverdict  {}\n", item_list(got, n), item_list(want, n),
               got == want ? "PASS" : "FAIL");
    return got == want ? kExitOk : kExitMismatch;
}

int cmd_bench(const Options &o) {
    fmt::print("{}", format_bench(bench_report(o.bits, o.marked), o.bits, o.marked));
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Single-query ensemble search on a simulated NMR spin register"};
    app.require_subcommand(1);
    Options o;

    auto *sim = app.add_subcommand("simulate", "prepare, query once, read out and verify");
    add_common(sim, o);
    sim->add_option("--pattern", o.pattern, "query over {0,1,x}, qubit 1 leftmost")->required();
    sim->add_option("--backend", o.backend, "ideal | hard | fast");

    auto *spec = app.add_subcommand("spectrum", "pre-query ancilla spectrum");
    add_common(spec, o);

    auto *comp = app.add_subcommand("compile", "gate sequence listing for a query");
    comp->add_option("--system", o.system, "builtin or spin-system config path");
    comp->add_option("--pattern", o.pattern, "query over {0,1,x}")->required();
    comp->add_option("--backend", o.backend, "ideal | hard");
    comp->add_option("--out", o.out, "output directory");

    auto *ver = app.add_subcommand("verify", "compare the query's action with brute-force matching");
    ver->add_option("--system", o.system, "builtin or spin-system config path");
    ver->add_option("--pattern", o.pattern, "query over {0,1,x}")->required();
    ver->add_option("--init", o.init, "thermal | eps");
    ver->add_option("--backend", o.backend, "ideal | hard | fast");

    auto *bench = app.add_subcommand("bench", "query counts of competing search methods");
    bench->add_option("--bits", o.bits, "database bits");
    bench->add_option("--marked", o.marked, "number of marked items");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(o);
        if (*spec) return cmd_spectrum(o);
        if (*comp) return cmd_compile(o);
        if (*ver) return cmd_verify(o);
        return cmd_bench(o);
    } catch (const NumericalError &e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return kExitNumerical;
    } catch (const DecodeError &e) {
        fmt::print(stderr, "decode failure: {}\n", e.what());
        return kExitNumerical;
    } catch (const Error &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitConfig;
    }
}
