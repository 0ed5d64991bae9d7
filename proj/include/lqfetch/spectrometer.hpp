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

// Ancilla-selective readout: read pulse, FID acquisition, Fourier transform,
// closed-form line oracle, peak picking and frequency-to-item decoding.
//
// All frequencies are in Hz relative to the receiver carrier. A coupled
// partner in state m shifts the ancilla line by J m Hz, so item 0 sits at
// +sum_i |J_0i| / 2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lqfetch/ensemble_state.hpp"
#include "lqfetch/operator_algebra.hpp"
#include "lqfetch/spin_system.hpp"

namespace lqfetch {

struct AcquisitionParams {
    std::size_t n_points = 16384;
    double dwell_s = 2e-3;
    double t2_s = 2.0;
    double carrier_hz = 0.0;

    double spectral_width_hz() const { return 1.0 / dwell_s; }
    double bin_hz() const { return 1.0 / (static_cast<double>(n_points) * dwell_s); }
    double linewidth_hz() const;  // FWHM = 1 / (pi T2)

    /// Checks sampling against the lines the system can produce.
    void validate(const SpinSystem &sys) const;
};

struct Spectrum {
    std::vector<double> freqs_hz;  // ascending, uniform
    std::vector<double> amplitude;
};

enum class MethylComponent { not_applicable, inner, outer };

/// One ancilla transition of a diagonal state.
struct ResonanceLine {
    double freq_hz = 0.0;
    double amplitude = 0.0;  // (p_alpha - p_beta) / 2 times the manifold weight
    std::uint64_t item = 0;
    MethylComponent component = MethylComponent::not_applicable;
};

/// All lines of a diagonal state, equivalent spins expanded into total-z manifolds.
std::vector<ResonanceLine> ancilla_lines(const DensityState &state, const SpinSystem &sys, double carrier_hz = 0.0);

/// Uniform frequency grid f_k = (k - N/2) / (N dwell).
std::vector<double> frequency_grid(const AcquisitionParams &params);

/// Closed-form spectrum of the sampled, damped line sum: exactly what
/// fft_spectrum(acquire_fid(...)) should produce, computed without a signal.
Spectrum analytic_spectrum(const DensityState &state, const SpinSystem &sys, const AcquisitionParams &params);

/// Read pulse (90 degrees about x on the ancilla) followed by free precession.
/// Equivalent spins are instantiated as separate physical spins and the
/// receiver phase is fixed so that p_alpha > p_beta gives positive absorption.
std::vector<Complex> acquire_fid(const DensityState &state, const SpinSystem &sys, const AcquisitionParams &params);

/// Transform with half-weight first point. zero_order_phase_rad rotates the
/// complex spectrum before the real part is taken.
Spectrum fft_spectrum(std::span<const Complex> fid, const AcquisitionParams &params, double zero_order_phase_rad = 0.0,
                      bool zero_pad = false);

/// Phase that makes the spectrum of `reference_fid` absorptive-positive.
double zero_order_phase(std::span<const Complex> reference_fid);

struct Peak {
    double freq_hz = 0.0;
    double amplitude = 0.0;
    std::optional<std::uint64_t> item;
    MethylComponent component = MethylComponent::not_applicable;
};

/// Local extrema with |amplitude| >= threshold_frac * max|amplitude|, refined by
/// a three-point parabola. Returned in ascending frequency.
std::vector<Peak> pick_peaks(const Spectrum &spec, double threshold_frac = 0.05);

struct DecodedLine {
    std::uint64_t item = 0;
    MethylComponent component = MethylComponent::not_applicable;
    double expected_hz = 0.0;
};

/// Table of every (item, manifold) line position for a spin system.
class LineDecoder {
   public:
    LineDecoder(const SpinSystem &sys, double tolerance_hz, double carrier_hz = 0.0);

    /// Nearest expected line; throws DecodeError when none is within tolerance
    /// or the two nearest both are.
    DecodedLine decode(double freq_hz) const;

    const std::vector<DecodedLine> &lines() const { return lines_; }  // ascending frequency

   private:
    std::vector<DecodedLine> lines_;
    double tolerance_hz_;
};

DecodedLine decode_item(double freq_hz, const SpinSystem &sys, double tolerance_hz, double carrier_hz = 0.0);

/// Fills item/component on each peak. Peaks that fail to decode keep item empty.
void decode_peaks(std::span<Peak> peaks, const LineDecoder &decoder);

struct Classification {
    std::vector<std::uint64_t> marked;        // every decoded peak negative
    std::vector<std::uint64_t> unmarked;      // every decoded peak positive
    std::vector<std::uint64_t> inconsistent;  // signs disagree across manifolds
};

Classification classify_marked(std::span<const Peak> peaks);

std::string_view component_name(MethylComponent c);

}  // namespace lqfetch
