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


#include "lqfetch/spectrometer.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include <fmt/format.h>

#include "lqfetch/error.hpp"
#include "lqfetch/kernels/kernels.hpp"

namespace lqfetch {

namespace {

constexpr std::size_t kMaxDecodeQubits = 20;

// C(k, j) / 2^(k-1): fraction of one sign-half of a k-spin group that sits in
// the manifold with j spins flipped against the majority.
double manifold_weight(int k, int j) {
    double c = 1.0;
    for (int i = 0; i < j; ++i) c = c * (k - i) / (i + 1);
    return std::ldexp(c, -(k - 1));
}

void require_n_qubits(const SpinSystem &sys, std::size_t n) {
    if (n != sys.num_spins()) {
        throw ValidationError(fmt::format("state has {} qubits, spin system has {}", n, sys.num_spins()));
    }
}

// Calls f(freq_hz, weight, component) for every ancilla line belonging to the
// engine configuration `engine` of the database qubits.
void for_each_line(const SpinSystem &sys, std::uint64_t engine, double carrier_hz,
                   const std::function<void(double, double, MethylComponent)> &f) {
    const std::size_t n = sys.num_db_qubits();
    double base = sys.spin(0).offset_hz - carrier_hz;
    std::vector<std::size_t> multi;
    for (std::size_t q = 1; q <= n; ++q) {
        const bool down = (engine >> sys.item_bit(q)) & 1;
        const int k = sys.spin(q).multiplicity;
        if (k == 1) {
            base += sys.j(0, q) * (down ? -0.5 : 0.5);
        } else {
            multi.push_back(q);
        }
    }
    if (multi.empty()) {
        f(base, 1.0, MethylComponent::not_applicable);
        return;
    }
    std::function<void(std::size_t, double, double, bool)> rec = [&](std::size_t i, double freq, double w, bool inner) {
        if (i == multi.size()) {
            f(freq, w, inner ? MethylComponent::inner : MethylComponent::outer);
            return;
        }
        const std::size_t q = multi[i];
        const bool down = (engine >> sys.item_bit(q)) & 1;
        const int k = sys.spin(q).multiplicity;
        for (int j = 0; 2 * j < k; ++j) {
            const double m = 0.5 * (k - 2 * j);
            rec(i + 1, freq + sys.j(0, q) * (down ? -m : m), w * manifold_weight(k, j), inner && 2 * m == 1);
        }
    };
    rec(0, base, 1.0, true);
}

std::mutex &fftw_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

double AcquisitionParams::linewidth_hz() const { return 1.0 / (kPi * t2_s); }

void AcquisitionParams::validate(const SpinSystem &sys) const {
    if (n_points < 256 || !std::has_single_bit(n_points)) {
        throw ValidationError(fmt::format("n_points must be a power of two >= 256, got {}", n_points));
    }
    if (!(dwell_s > 0) || !std::isfinite(dwell_s)) throw ValidationError("dwell must be positive");
    if (!(t2_s > 0) || !std::isfinite(t2_s)) throw ValidationError("T2 must be positive");
    if (!std::isfinite(carrier_hz)) throw ValidationError("carrier must be finite");

    double extent = std::abs(sys.spin(0).offset_hz - carrier_hz);
    double smallest = 0.0;
    for (std::size_t q = 1; q < sys.num_spins(); ++q) {
        const double j = std::abs(sys.j(0, q));
        extent += 0.5 * j * sys.spin(q).multiplicity;
        if (j > 0 && (smallest == 0.0 || j < smallest)) smallest = j;
    }
    const double need = 2.0 * (extent + 3.0 * linewidth_hz());
    if (spectral_width_hz() < need) {
        throw ValidationError(
            fmt::format("spectral width {:.6g} Hz is below the required {:.6g} Hz", spectral_width_hz(), need));
    }
    if (smallest > 0 && bin_hz() > smallest / 4.0) {
        throw ValidationError(fmt::format(
            "resolution {:.6g} Hz/bin gives fewer than 4 bins across the {:.6g} Hz splitting", bin_hz(), smallest));
    }
}

std::vector<ResonanceLine> ancilla_lines(const DensityState &state, const SpinSystem &sys, double carrier_hz) {
    require_n_qubits(sys, state.num_qubits());
    if (!state.is_diagonal()) throw ValidationError("line enumeration requires a diagonal state");
    const std::size_t half = state.dim() / 2;
    std::vector<ResonanceLine> out;
    for (std::uint64_t e = 0; e < half; ++e) {
        const double delta = state.population(e) - state.population(half + e);
        const std::uint64_t item = sys.engine_to_item(e);
        for_each_line(sys, e, carrier_hz, [&](double freq, double w, MethylComponent c) {
            out.push_back({freq, 0.5 * delta * w, item, c});
        });
    }
    return out;
}

std::vector<double> frequency_grid(const AcquisitionParams &params) {
    const std::size_t n = params.n_points;
    std::vector<double> f(n);
    const double scale = 1.0 / (static_cast<double>(n) * params.dwell_s);
    for (std::size_t k = 0; k < n; ++k) {
        f[k] = (static_cast<double>(k) - static_cast<double>(n / 2)) * scale;
    }
    return f;
}

Spectrum analytic_spectrum(const DensityState &state, const SpinSystem &sys, const AcquisitionParams &params) {
    params.validate(sys);
    Spectrum spec;
    spec.freqs_hz = frequency_grid(params);
    const std::size_t n = params.n_points;
    spec.amplitude.assign(n, 0.0);

    std::vector<double> u_re(n), u_im(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ph = -2.0 * kPi * spec.freqs_hz[k] * params.dwell_s;
        u_re[k] = std::cos(ph);
        u_im[k] = std::sin(ph);
    }

    const auto &kt = kernels::active();
    const double dt = params.dwell_s;
    const double total = static_cast<double>(n) * dt;
    for (const ResonanceLine &line : ancilla_lines(state, sys, params.carrier_hz)) {
        if (line.amplitude == 0.0) continue;
        const double w = 2.0 * kPi * line.freq_hz;
        const Complex q = std::exp(Complex(-dt / params.t2_s, w * dt));
        const Complex c = std::exp(Complex(-total / params.t2_s, w * total));
        const Complex num = dt * line.amplitude * (1.0 - c);
        kt.damped_line_accumulate(n, u_re.data(), u_im.data(), q, num, 0.5 * dt * line.amplitude,
                                  spec.amplitude.data());
    }
    return spec;
}

std::vector<Complex> acquire_fid(const DensityState &state, const SpinSystem &sys, const AcquisitionParams &params) {
    params.validate(sys);
    require_n_qubits(sys, state.num_qubits());
    if (!state.is_diagonal()) {
        throw ValidationError("acquisition needs a diagonal state; coherences in the logical basis are ambiguous");
    }

    // Physical register: each spin expanded into `multiplicity` copies.
    const std::size_t m = sys.num_spins();
    std::vector<std::size_t> first(m), owner;
    for (std::size_t q = 0; q < m; ++q) {
        first[q] = owner.size();
        for (int c = 0; c < sys.spin(q).multiplicity; ++c) owner.push_back(q);
    }
    const std::size_t pm = owner.size();
    if (pm > kMaxDenseQubits) {
        throw ValidationError(fmt::format("{} physical spins exceed the dense limit of {}", pm, kMaxDenseQubits));
    }
    const std::size_t pdim = std::size_t{1} << pm;

    // Spread logical populations evenly over the physical states of each half.
    auto logical_of = [&](std::uint64_t phys) {
        std::uint64_t logical = 0;
        for (std::size_t q = 0; q < m; ++q) {
            const int k = sys.spin(q).multiplicity;
            int down = 0;
            for (int c = 0; c < k; ++c) down += (phys >> (pm - 1 - (first[q] + c))) & 1;
            if (2 * down > k) logical |= std::uint64_t{1} << (m - 1 - q);
        }
        return logical;
    };
    double split = 1.0;
    for (const Spin &s : sys.spins()) split = std::ldexp(split, -(s.multiplicity - 1));

    ComplexMatrix rho(pdim);
    for (std::uint64_t b = 0; b < pdim; ++b) rho(b, b) = state.population(logical_of(b)) * split;

    const Matrix2 read = rotation_2x2(Axis::x, Angle::degrees(90));
    const Matrix2 read_dag = {std::conj(read[0]), std::conj(read[2]), std::conj(read[1]), std::conj(read[3])};
    rho.apply_left(0, read);
    rho.apply_right(0, read_dag);

    auto energy = [&](std::uint64_t b) {
        double e = 0.0;
        for (std::size_t p = 0; p < pm; ++p) {
            const double mp = ((b >> (pm - 1 - p)) & 1) ? -0.5 : 0.5;
            e += sys.spin(owner[p]).offset_hz * mp;
            for (std::size_t r = p + 1; r < pm; ++r) {
                if (owner[r] == owner[p]) continue;
                const double mr = ((b >> (pm - 1 - r)) & 1) ? -0.5 : 0.5;
                e += sys.j(owner[p], owner[r]) * mp * mr;
            }
        }
        return e;
    };

    const std::size_t half = pdim / 2;
    std::vector<Complex> fid(params.n_points, Complex{});
    const auto &kt = kernels::active();
    const Complex receiver(0.0, 1.0);
    for (std::uint64_t b = 0; b < half; ++b) {
        const Complex coh = rho(half + b, b);
        if (coh == Complex{}) continue;
        const double freq = energy(b) - energy(half + b) - params.carrier_hz;
        const Complex rate(-params.dwell_s / params.t2_s, 2.0 * kPi * freq * params.dwell_s);
        kt.phasor_accumulate(params.n_points, receiver * coh, rate, fid.data());
    }
    for (const Complex &z : fid) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalError("non-finite FID sample");
    }
    return fid;
}

Spectrum fft_spectrum(std::span<const Complex> fid, const AcquisitionParams &params, double zero_order_phase_rad,
                      bool zero_pad) {
    const std::size_t n = params.n_points;
    if (!std::has_single_bit(n)) throw ValidationError(fmt::format("transform length {} is not a power of two", n));
    if (fid.size() != n && !(zero_pad && fid.size() < n)) {
        throw ValidationError(fmt::format("FID has {} points, expected {}", fid.size(), n));
    }
    if (fid.empty()) throw ValidationError("empty FID");

    std::vector<Complex> buf(n, Complex{});
    for (std::size_t j = 0; j < fid.size(); ++j) buf[j] = (j & 1) ? -fid[j] : fid[j];
    buf[0] *= 0.5;

    {
        std::lock_guard lock(fftw_mutex());
        auto *io = reinterpret_cast<fftw_complex *>(buf.data());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), io, io, FFTW_FORWARD, FFTW_ESTIMATE);
        if (plan == nullptr) throw NumericalError("FFT planning failed");
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    Spectrum spec;
    spec.freqs_hz = frequency_grid(params);
    spec.amplitude.resize(n);
    const Complex rot = std::polar(params.dwell_s, zero_order_phase_rad);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = (buf[k] * rot).real();
        if (!std::isfinite(v)) throw NumericalError("non-finite spectrum value");
        spec.amplitude[k] = v;
    }
    return spec;
}

double zero_order_phase(std::span<const Complex> reference_fid) {
    // The grid sum of a spectrum equals N x_0, so aligning arg(s_0) with the
    // real axis makes the integrated spectrum positive.
    if (reference_fid.empty() || std::abs(reference_fid[0]) == 0.0) return 0.0;
    return -std::arg(reference_fid[0]);
}

std::vector<Peak> pick_peaks(const Spectrum &spec, double threshold_frac) {
    const auto &a = spec.amplitude;
    std::vector<Peak> peaks;
    if (a.size() < 3) return peaks;
    double top = 0.0;
    for (double v : a) top = std::max(top, std::abs(v));
    if (top == 0.0) return peaks;
    const double thr = threshold_frac * top;
    const double bin = spec.freqs_hz[1] - spec.freqs_hz[0];
    for (std::size_t k = 1; k + 1 < a.size(); ++k) {
        const double y0 = a[k], ym = a[k - 1], yp = a[k + 1];
        if (std::abs(y0) < thr) continue;
        const bool maximum = y0 > 0 && y0 > ym && y0 >= yp;
        const bool minimum = y0 < 0 && y0 < ym && y0 <= yp;
        if (!maximum && !minimum) continue;
        const double den = ym - 2.0 * y0 + yp;
        const double d = den != 0.0 ? 0.5 * (ym - yp) / den : 0.0;
        Peak p;
        p.freq_hz = spec.freqs_hz[k] + d * bin;
        p.amplitude = y0 - 0.25 * (ym - yp) * d;
        peaks.push_back(p);
    }
    return peaks;
}

LineDecoder::LineDecoder(const SpinSystem &sys, double tolerance_hz, double carrier_hz) : tolerance_hz_(tolerance_hz) {
    if (!(tolerance_hz > 0)) throw ValidationError("decode tolerance must be positive");
    const std::size_t n = sys.num_db_qubits();
    if (n > kMaxDecodeQubits) throw ValidationError(fmt::format("decode table for {} qubits is too large", n));
    for (std::uint64_t e = 0; e < (std::uint64_t{1} << n); ++e) {
        const std::uint64_t item = sys.engine_to_item(e);
        for_each_line(sys, e, carrier_hz, [&](double freq, double, MethylComponent c) {
            lines_.push_back({item, c, freq});
        });
    }
    std::sort(lines_.begin(), lines_.end(), [](const DecodedLine &x, const DecodedLine &y) {
        return x.expected_hz < y.expected_hz || (x.expected_hz == y.expected_hz && x.item < y.item);
    });
}

DecodedLine LineDecoder::decode(double freq_hz) const {
    if (lines_.empty()) throw DecodeError("empty decode table");
    auto it = std::lower_bound(lines_.begin(), lines_.end(), freq_hz,
                               [](const DecodedLine &l, double f) { return l.expected_hz < f; });
    // Nearest two candidates lie among it-2 .. it+1.
    const DecodedLine *best = nullptr;
    const DecodedLine *second = nullptr;
    auto lo = it - std::min<std::ptrdiff_t>(2, it - lines_.begin());
    auto hi = it + std::min<std::ptrdiff_t>(2, lines_.end() - it);
    for (auto p = lo; p != hi; ++p) {
        const double d = std::abs(p->expected_hz - freq_hz);
        if (best == nullptr || d < std::abs(best->expected_hz - freq_hz)) {
            second = best;
            best = &*p;
        } else if (second == nullptr || d < std::abs(second->expected_hz - freq_hz)) {
            second = &*p;
        }
    }
    if (std::abs(best->expected_hz - freq_hz) > tolerance_hz_) {
        throw DecodeError(fmt::format("no line within {:.3g} Hz of {:.6f} Hz", tolerance_hz_, freq_hz));
    }
    if (second != nullptr && std::abs(second->expected_hz - freq_hz) <= tolerance_hz_) {
        throw DecodeError(fmt::format("{:.6f} Hz is ambiguous between lines at {:.6f} and {:.6f} Hz", freq_hz,
                                      best->expected_hz, second->expected_hz));
    }
    return *best;
}

DecodedLine decode_item(double freq_hz, const SpinSystem &sys, double tolerance_hz, double carrier_hz) {
    return LineDecoder(sys, tolerance_hz, carrier_hz).decode(freq_hz);
}

void decode_peaks(std::span<Peak> peaks, const LineDecoder &decoder) {
    for (Peak &p : peaks) {
        try {
            const DecodedLine d = decoder.decode(p.freq_hz);
            p.item = d.item;
            p.component = d.component;
        } catch (const DecodeError &) {
            p.item.reset();
        }
    }
}

Classification classify_marked(std::span<const Peak> peaks) {
    std::map<std::uint64_t, std::pair<int, int>> signs;  // item -> (negative, positive)
    for (const Peak &p : peaks) {
        if (!p.item) continue;
        auto &s = signs[*p.item];
        (p.amplitude < 0 ? s.first : s.second)++;
    }
    Classification out;
    for (const auto &[item, s] : signs) {
        if (s.first > 0 && s.second > 0) {
            out.inconsistent.push_back(item);
        } else if (s.first > 0) {
            out.marked.push_back(item);
        } else {
            out.unmarked.push_back(item);
        }
    }
    return out;
}

std::string_view component_name(MethylComponent c) {
    switch (c) {
        case MethylComponent::inner: return "inner";
        case MethylComponent::outer: return "outer";
        case MethylComponent::not_applicable: break;
    }
    return "n/a";
}

}  // namespace lqfetch
