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

#include "lqfetch/gate_compiler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "lqfetch/error.hpp"

namespace lqfetch {
namespace {

constexpr Angle kQuarterTurn = Angle::degrees(90.0);

SelectivePulse pulse(std::size_t q, PulseAxis axis, Angle a) { return SelectivePulse{q, axis, a, 0.0}; }

// V_n = exp(-i pi/2 I_x^t) exp(-i pi I_z^k I_z^t) exp(+i pi/2 I_x^t) exp(-i pi/2 I_y^t),
// listed in time order (rightmost factor first). The middle factor is
// zz_evolution(pi/2) in the exp(-i angle 2 I_z I_z) convention.
void emit_v(GateSequence &seq, std::size_t k, std::size_t t) {
    seq.append(pulse(t, PulseAxis::y, kQuarterTurn));
    seq.append(pulse(t, PulseAxis::minus_x, kQuarterTurn));
    seq.append(ZZEvolution{k, t, Angle::radians(kPi / 2.0)});
    seq.append(pulse(t, PulseAxis::x, kQuarterTurn));
}

void emit_v_dagger(GateSequence &seq, std::size_t k, std::size_t t) {
    seq.append(pulse(t, PulseAxis::minus_x, kQuarterTurn));
    seq.append(ZZEvolution{k, t, Angle::radians(-kPi / 2.0)});
    seq.append(pulse(t, PulseAxis::x, kQuarterTurn));
    seq.append(pulse(t, PulseAxis::minus_y, kQuarterTurn));
}

// exp(-i lambda 2^{|chain|} I_z^{k_1} ... I_z^{k_n} I_z^t) with chain ascending.
void emit_term(GateSequence &seq, std::span<const std::size_t> chain, std::size_t target, double lambda) {
    if (chain.empty()) {
        seq.append(VirtualZ{target, Angle::radians(lambda)});
        return;
    }
    if (chain.size() == 1) {
        seq.append(ZZEvolution{chain[0], target, Angle::radians(lambda)});
        return;
    }
    const std::size_t kn = chain.back();
    emit_v_dagger(seq, kn, target);
    emit_term(seq, chain.first(chain.size() - 1), target, lambda);
    emit_v(seq, kn, target);
}

Matrix2 pulse_matrix(const SelectivePulse &p) {
    switch (p.axis) {
        case PulseAxis::x:
            return rotation_2x2(Axis::x, p.angle);
        case PulseAxis::y:
            return rotation_2x2(Axis::y, p.angle);
        case PulseAxis::minus_x:
            return rotation_2x2(Axis::x, -p.angle);
        case PulseAxis::minus_y:
            return rotation_2x2(Axis::y, -p.angle);
    }
    return {};
}

std::string_view axis_name(PulseAxis a) {
    switch (a) {
        case PulseAxis::x:
            return "x";
        case PulseAxis::y:
            return "y";
        case PulseAxis::minus_x:
            return "-x";
        case PulseAxis::minus_y:
            return "-y";
    }
    return "?";
}

std::vector<Complex> z_rotation_diagonal(std::size_t qubit, Angle angle, std::size_t m) {
    const std::size_t dim = std::size_t{1} << m;
    const std::size_t s = qubit_stride(qubit, m);
    std::vector<Complex> d(dim);
    const Complex up = std::polar(1.0, -angle.rad() / 2.0);
    const Complex down = std::conj(up);
    for (std::size_t b = 0; b < dim; ++b) {
        d[b] = (b & s) ? down : up;
    }
    return d;
}

std::vector<Complex> zz_diagonal(std::size_t q1, std::size_t q2, Angle angle, std::size_t m) {
    const std::size_t dim = std::size_t{1} << m;
    const std::size_t s1 = qubit_stride(q1, m);
    const std::size_t s2 = qubit_stride(q2, m);
    std::vector<Complex> d(dim);
    const Complex same = std::polar(1.0, -angle.rad() / 2.0);
    const Complex diff = std::conj(same);
    for (std::size_t b = 0; b < dim; ++b) {
        d[b] = (((b & s1) != 0) == ((b & s2) != 0)) ? same : diff;
    }
    return d;
}

void check_gate_qubits(const Gate &g, std::size_t m) {
    const auto check = [m](std::size_t q) {
        if (q >= m) {
            throw IndexError("gate acts on qubit " + std::to_string(q) + " of a " + std::to_string(m) +
                             "-qubit sequence");
        }
    };
    std::visit(
        [&](const auto &gate) {
            using T = std::decay_t<decltype(gate)>;
            if constexpr (std::is_same_v<T, SelectivePulse> || std::is_same_v<T, VirtualZ>) {
                check(gate.qubit);
            } else if constexpr (std::is_same_v<T, ZZEvolution>) {
                check(gate.q1);
                check(gate.q2);
                if (gate.q1 == gate.q2) {
                    throw IndexError("ZZ evolution on a single qubit");
                }
            }
        },
        g);
}

// ---------------------------------------------------------------------------
// Refocusing schemes
//
// Over 2^r equal segments spin k sees the toggling sign
// eps_k(s) = (-1)^popcount(w_k & s). Averages of eps_k vanish unless w_k == 0
// and averages of eps_a eps_b vanish unless w_a == w_b, so giving the active
// pair a shared value and every other coupled pair distinct values isolates
// the pair exactly.

struct Scheme {
    std::size_t segments = 0;
    std::vector<std::size_t> walsh;
    std::size_t pulses = 0;
};

int toggle_sign(std::size_t w, std::size_t s) { return (std::popcount(w & s) % 2 == 0) ? 1 : -1; }

std::size_t scheme_pulses(std::size_t w, std::size_t segments) {
    std::size_t count = 0;
    for (std::size_t s = 0; s + 1 < segments; ++s) {
        count += toggle_sign(w, s) != toggle_sign(w, s + 1);
    }
    count += toggle_sign(w, segments - 1) < 0;
    return count;
}

std::optional<Scheme> find_scheme(const SpinSystem &sys, std::size_t q1, std::size_t q2, double floor_hz) {
    const std::size_t m = sys.num_spins();
    const auto coupled = [&](std::size_t a, std::size_t b) {
        return std::abs(sys.j(a, b)) > floor_hz && !((a == q1 && b == q2) || (a == q2 && b == q1));
    };
    const auto shifted = [&](std::size_t k) { return sys.spin(k).offset_hz != 0.0; };

    for (std::size_t r = 1; r <= 7; ++r) {
        const std::size_t values = std::size_t{1} << r;
        std::optional<Scheme> best;
        for (std::size_t shared = 0; shared < values; ++shared) {
            if (shared == 0 && (shifted(q1) || shifted(q2))) {
                continue;
            }
            std::vector<std::size_t> w(m, values);  // `values` marks unassigned
            w[q1] = shared;
            w[q2] = shared;
            bool ok = true;
            for (std::size_t k = 0; k < m && ok; ++k) {
                if (k == q1 || k == q2) {
                    continue;
                }
                ok = false;
                for (std::size_t v = shifted(k) ? 1 : 0; v < values; ++v) {
                    bool clash = false;
                    for (std::size_t o = 0; o < m && !clash; ++o) {
                        clash = o != k && w[o] == v && coupled(k, o);
                    }
                    if (!clash) {
                        w[k] = v;
                        ok = true;
                        break;
                    }
                }
            }
            if (!ok) {
                continue;
            }
            Scheme sch{values, w, 0};
            for (std::size_t k = 0; k < m; ++k) {
                sch.pulses += scheme_pulses(w[k], values);
            }
            if (!best || sch.pulses < best->pulses) {
                best = std::move(sch);
            }
        }
        if (best) {
            return best;
        }
    }
    return std::nullopt;
}

void emit_zz_block(GateSequence &out, const ZZEvolution &zz, const SpinSystem &sys, const HardPulseOptions &opts) {
    const double j = sys.j(zz.q1, zz.q2);
    if (std::abs(j) <= opts.coupling_floor_hz) {
        throw ValidationError(fmt::format("cannot realize ZZ evolution on spins {},{}: no scalar coupling", zz.q1, zz.q2));
    }
    // exp(-i theta 2 I_z I_z) is 2 pi periodic up to global phase.
    const double theta = std::remainder(zz.angle.rad(), 2.0 * kPi);
    if (theta == 0.0) {
        return;
    }
    const double total = std::abs(theta) / (kPi * std::abs(j));
    const bool invert = (theta < 0.0) != (j < 0.0);

    const std::optional<Scheme> scheme = find_scheme(sys, zz.q1, zz.q2, opts.coupling_floor_hz);
    if (!scheme) {
        throw ValidationError("no refocusing scheme isolates the requested coupling");
    }
    const Angle pi = Angle::degrees(180.0);
    const auto flip = [&](std::size_t q) { out.append(SelectivePulse{q, PulseAxis::x, pi, opts.pulse_duration_s}); };

    if (invert) {
        flip(zz.q1);
    }
    const std::size_t segments = scheme->segments;
    for (std::size_t s = 0; s < segments; ++s) {
        out.append(Delay{total / static_cast<double>(segments)});
        for (std::size_t k = 0; k < sys.num_spins(); ++k) {
            const int now = toggle_sign(scheme->walsh[k], s);
            const int next = (s + 1 < segments) ? toggle_sign(scheme->walsh[k], s + 1) : 1;
            if (now != next) {
                flip(k);
            }
        }
    }
    if (invert) {
        flip(zz.q1);
    }
}

}  // namespace

void GateSequence::append(Gate g) { gates.push_back(std::move(g)); }

void GateSequence::append(const GateSequence &other) {
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

GateSequence compile_multilinear_z_phase(
    std::size_t total_qubits, std::size_t target, std::span<const Control> controls, Angle angle) {
    if (target >= total_qubits) {
        throw IndexError("target qubit out of range");
    }
    for (std::size_t a = 0; a < controls.size(); ++a) {
        if (controls[a].qubit >= total_qubits) {
            throw IndexError("control qubit out of range");
        }
        if (controls[a].qubit == target) {
            throw IndexError("control qubit coincides with target");
        }
        for (std::size_t b = a + 1; b < controls.size(); ++b) {
            if (controls[a].qubit == controls[b].qubit) {
                throw IndexError("duplicate control qubit");
            }
        }
    }
    std::vector<Control> sorted(controls.begin(), controls.end());
    std::sort(sorted.begin(), sorted.end(), [](const Control &a, const Control &b) { return a.qubit < b.qubit; });

    GateSequence seq;
    seq.mode = SequenceMode::ideal;
    seq.num_qubits = total_qubits;

    // prod_c (1 + sigma_c 2 I_z^c) / 2 = 2^-k sum_S prod_{c in S} sigma_c 2 I_z^c, so the exponent
    // becomes sum_S lambda_S 2^{|S|} I_z^t prod_{c in S} I_z^c with lambda_S = angle sigma_S / 2^k.
    const std::size_t k = sorted.size();
    const double scale = angle.rad() / static_cast<double>(std::size_t{1} << k);
    std::vector<std::size_t> chain;
    for (std::size_t subset = 0; subset < (std::size_t{1} << k); ++subset) {
        chain.clear();
        double sigma = 1.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (subset & (std::size_t{1} << c)) {
                chain.push_back(sorted[c].qubit);
                sigma *= static_cast<double>(sorted[c].sign) * (sorted[c].polarity ? -1.0 : 1.0);
            }
        }
        emit_term(seq, chain, target, scale * sigma);
    }
    return seq;
}

GateSequence build_query_network(const SpinSystem &sys, const QueryPattern &pattern) {
    const std::size_t n = sys.num_db_qubits();
    if (pattern.size() != n) {
        throw ValidationError(fmt::format("pattern '{}' has length {}, system has {} database qubits", pattern.str(),
                                          pattern.size(), n));
    }
    std::vector<Control> controls;
    for (std::size_t q = 1; q <= n; ++q) {
        const Constraint c = pattern.at(q);
        if (c == Constraint::wild) {
            continue;
        }
        controls.push_back(Control{q, c == Constraint::one ? 1 : 0, sys.bit_signs()[q]});
    }
    const std::size_t anc = sys.ancilla();
    GateSequence seq;
    seq.mode = SequenceMode::ideal;
    seq.num_qubits = sys.num_spins();
    // H = exp(-i pi I_x) exp(-i pi/2 I_y): the y pulse goes first. H H = -1, so the
    // same pair closes the network.
    const auto hadamard = [&] {
        seq.append(pulse(anc, PulseAxis::y, kQuarterTurn));
        seq.append(pulse(anc, PulseAxis::x, Angle::degrees(180.0)));
    };
    hadamard();
    seq.append(compile_multilinear_z_phase(sys.num_spins(), anc, controls, Angle::radians(kPi)));
    hadamard();
    return seq;
}

GateSequence expand_to_hard_pulses(const GateSequence &seq, const SpinSystem &sys, const HardPulseOptions &opts) {
    if (seq.mode != SequenceMode::ideal) {
        throw ValidationError("expand_to_hard_pulses expects an ideal sequence");
    }
    if (seq.num_qubits != sys.num_spins()) {
        throw ValidationError("sequence and spin system sizes differ");
    }
    GateSequence out;
    out.mode = SequenceMode::hard_pulse;
    out.num_qubits = seq.num_qubits;
    for (const Gate &g : seq.gates) {
        check_gate_qubits(g, seq.num_qubits);
        if (const auto *p = std::get_if<SelectivePulse>(&g)) {
            SelectivePulse copy = *p;
            copy.duration_s = opts.pulse_duration_s;
            out.append(copy);
        } else if (const auto *zz = std::get_if<ZZEvolution>(&g)) {
            emit_zz_block(out, *zz, sys, opts);
        } else if (const auto *vz = std::get_if<VirtualZ>(&g)) {
            // Frame updates merge with an immediately preceding update of the same frame.
            if (!out.gates.empty()) {
                if (auto *prev = std::get_if<VirtualZ>(&out.gates.back()); prev && prev->qubit == vz->qubit) {
                    prev->angle = prev->angle + vz->angle;
                    if (std::remainder(prev->angle.rad(), 4.0 * kPi) == 0.0) {
                        out.gates.pop_back();
                    }
                    continue;
                }
            }
            if (std::remainder(vz->angle.rad(), 4.0 * kPi) != 0.0) {
                out.append(*vz);
            }
        } else {
            throw ValidationError("ideal sequences contain no delays");
        }
    }
    return out;
}

SequenceReport sequence_report(const GateSequence &seq) {
    SequenceReport r;
    r.mode = seq.mode;
    for (const Gate &g : seq.gates) {
        std::visit(
            [&](const auto &gate) {
                using T = std::decay_t<decltype(gate)>;
                if constexpr (std::is_same_v<T, SelectivePulse>) {
                    ++r.pulses;
                    r.duration_s += gate.duration_s;
                    ++r.pulses_by_kind[fmt::format("{:g} {}", gate.angle.deg(), axis_name(gate.axis))];
                } else if constexpr (std::is_same_v<T, ZZEvolution>) {
                    ++r.zz_evolutions;
                } else if constexpr (std::is_same_v<T, VirtualZ>) {
                    ++r.virtual_z;
                } else {
                    ++r.delays;
                    r.duration_s += gate.seconds;
                }
            },
            g);
    }
    return r;
}

ComplexMatrix ideal_unitary(const GateSequence &seq) {
    const std::size_t m = seq.num_qubits;
    if (m == 0 || m > kMaxDenseQubits) {
        throw ValidationError("sequence register too large for dense simulation");
    }
    ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << m);
    for (const Gate &g : seq.gates) {
        check_gate_qubits(g, m);
        if (const auto *p = std::get_if<SelectivePulse>(&g)) {
            u.apply_left(p->qubit, pulse_matrix(*p));
        } else if (const auto *zz = std::get_if<ZZEvolution>(&g)) {
            u.apply_diagonal_left(zz_diagonal(zz->q1, zz->q2, zz->angle, m));
        } else if (const auto *vz = std::get_if<VirtualZ>(&g)) {
            u.apply_diagonal_left(z_rotation_diagonal(vz->qubit, vz->angle, m));
        } else {
            throw ValidationError("ideal sequences contain no delays");
        }
    }
    return u;
}

std::vector<Complex> free_evolution_diagonal(const SpinSystem &sys, double seconds) {
    const std::size_t m = sys.num_spins();
    const std::size_t dim = std::size_t{1} << m;
    std::vector<Complex> d(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        double energy = 0.0;  // Hz
        for (std::size_t i = 0; i < m; ++i) {
            const double mi = (b & qubit_stride(i, m)) ? -0.5 : 0.5;
            energy += sys.spin(i).offset_hz * mi;
            for (std::size_t k = i + 1; k < m; ++k) {
                const double mk = (b & qubit_stride(k, m)) ? -0.5 : 0.5;
                energy += sys.j(i, k) * mi * mk;
            }
        }
        d[b] = std::polar(1.0, -2.0 * kPi * energy * seconds);
    }
    return d;
}

ComplexMatrix hard_pulse_propagator(const GateSequence &seq, const SpinSystem &sys) {
    const std::size_t m = seq.num_qubits;
    if (m != sys.num_spins()) {
        throw ValidationError("sequence and spin system sizes differ");
    }
    if (m > kMaxDenseQubits) {
        throw ValidationError("sequence register too large for dense simulation");
    }
    ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << m);
    for (const Gate &g : seq.gates) {
        check_gate_qubits(g, m);
        if (const auto *p = std::get_if<SelectivePulse>(&g)) {
            u.apply_left(p->qubit, pulse_matrix(*p));
        } else if (const auto *vz = std::get_if<VirtualZ>(&g)) {
            u.apply_diagonal_left(z_rotation_diagonal(vz->qubit, vz->angle, m));
        } else if (const auto *d = std::get_if<Delay>(&g)) {
            if (!(d->seconds >= 0.0)) {
                throw ValidationError("negative delay");
            }
            u.apply_diagonal_left(free_evolution_diagonal(sys, d->seconds));
        } else {
            throw ValidationError("hard-pulse sequences contain no ideal ZZ evolutions");
        }
    }
    return u;
}

ComplexMatrix sequence_unitary(const GateSequence &seq, const SpinSystem &sys) {
    return seq.mode == SequenceMode::ideal ? ideal_unitary(seq) : hard_pulse_propagator(seq, sys);
}

std::string format_listing(const GateSequence &seq) {
    std::string out;
    for (const Gate &g : seq.gates) {
        std::visit(
            [&](const auto &gate) {
                using T = std::decay_t<decltype(gate)>;
                if constexpr (std::is_same_v<T, SelectivePulse>) {
                    out += fmt::format("PULSE q={} axis={} deg={:.12g}\n", gate.qubit, axis_name(gate.axis),
                                       gate.angle.deg());
                } else if constexpr (std::is_same_v<T, ZZEvolution>) {
                    out += fmt::format("ZZ q={},{} rad={:.12g}\n", gate.q1, gate.q2, gate.angle.rad());
                } else if constexpr (std::is_same_v<T, VirtualZ>) {
                    out += fmt::format("VZ q={} rad={:.12g}\n", gate.qubit, gate.angle.rad());
                } else {
                    out += fmt::format("DELAY s={:.12g}\n", gate.seconds);
                }
            },
            g);
    }
    const SequenceReport r = sequence_report(seq);
    out += "# report\n";
    out += fmt::format("# mode = {}\n", r.mode == SequenceMode::ideal ? "ideal" : "hard_pulse");
    out += fmt::format("# pulses = {}\n# zz = {}\n# vz = {}\n# delays = {}\n", r.pulses, r.zz_evolutions,
                       r.virtual_z, r.delays);
    out += fmt::format("# duration_s = {:.12g}\n", r.duration_s);
    for (const auto &[kind, count] : r.pulses_by_kind) {
        out += fmt::format("# pulse {} = {}\n", kind, count);
    }
    return out;
}

}  // namespace lqfetch
