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


#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "lqfetch/pipeline.hpp"

namespace lqfetch {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json peak_list(const SpinSystem &sys, const std::vector<Peak> &peaks, const std::vector<std::uint64_t> *marked) {
    ordered_json arr = ordered_json::array();
    for (const Peak &p : peaks) {
        ordered_json j;
        // rounded so that last-digit noise never reaches the file
        j["freq_hz"] = std::round(p.freq_hz * 1e6) / 1e6;
        j["amplitude"] = std::stod(fmt::format("{:.9e}", p.amplitude));
        if (p.item) {
            j["item"] = *p.item;
            j["bits"] = item_bits(*p.item, sys.num_db_qubits());
        } else {
            j["item"] = nullptr;
            j["bits"] = nullptr;
        }
        j["manifold"] = component_name(p.component);
        if (marked) {
            j["marked"] = p.item && std::binary_search(marked->begin(), marked->end(), *p.item);
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

ordered_json items(const std::vector<std::uint64_t> &v) { return ordered_json(v); }

}  // namespace

std::string item_bits(std::uint64_t item, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        if ((item >> (n - 1 - i)) & 1) s[i] = '1';
    }
    return s;
}

std::string spectrum_csv(const Spectrum &spec) {
    std::string out = "freq_hz,amplitude\n";
    out.reserve(spec.freqs_hz.size() * 32);
    for (std::size_t k = 0; k < spec.freqs_hz.size(); ++k) {
        out += fmt::format("{:.6f},{:.9e}\n", spec.freqs_hz[k], spec.amplitude[k]);
    }
    return out;
}

std::string peaks_json(const SpinSystem &sys, const std::vector<Peak> &peaks) {
    ordered_json j;
    j["peaks"] = peak_list(sys, peaks, nullptr);
    return j.dump(2) + "\n";
}

std::string peaks_json(const RunResult &r) {
    ordered_json j;
    j["pattern"] = r.pattern.str();
    j["oracle_calls"] = r.oracle_calls;
    j["verified"] = r.verified;
    j["marked"] = items(r.marked);
    j["expected"] = items(r.expected);
    j["inconsistent"] = items(r.classification.inconsistent);
    j["before"] = peak_list(r.system, r.before_peaks, nullptr);
    j["after"] = peak_list(r.system, r.after_peaks, &r.marked);
    return j.dump(2) + "\n";
}

std::string spectrum_svg(const std::vector<std::pair<std::string, const Spectrum *>> &panels) {
    constexpr int kWidth = 900;
    constexpr int kPanel = 260;
    constexpr int kLeft = 60;
    constexpr int kRight = 20;
    constexpr int kTop = 30;
    constexpr int kPlotW = kWidth - kLeft - kRight;
    constexpr int kPlotH = kPanel - 70;
    const int height = static_cast<int>(panels.size()) * kPanel;

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, height, kWidth, height);

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const Spectrum &s = *panels[p].second;
        const int y0 = static_cast<int>(p) * kPanel + kTop;
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>\n", kLeft, y0 - 10, panels[p].first);
        if (s.freqs_hz.size() < 2) continue;

        double top = 0.0;
        for (double v : s.amplitude) top = std::max(top, std::abs(v));
        if (top == 0.0) top = 1.0;
        const double fmin = s.freqs_hz.front();
        const double fmax = s.freqs_hz.back();
        // high frequency on the left
        auto xpos = [&](double f) { return kLeft + (fmax - f) / (fmax - fmin) * kPlotW; };
        auto ypos = [&](double a) { return y0 + kPlotH / 2.0 - a / top * (kPlotH / 2.0); };

        out += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#bbb\"/>\n", kLeft,
                           ypos(0), kLeft + kPlotW, ypos(0));
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", kLeft, y0 + kPlotH,
                           kLeft + kPlotW, y0 + kPlotH);

        // min/max envelope per pixel column keeps narrow lines visible
        std::string pts;
        std::vector<double> lo(kPlotW + 1, 0.0), hi(kPlotW + 1, 0.0);
        std::vector<bool> seen(kPlotW + 1, false);
        for (std::size_t k = 0; k < s.freqs_hz.size(); ++k) {
            const int col = static_cast<int>(std::lround(xpos(s.freqs_hz[k]) - kLeft));
            const double a = s.amplitude[k];
            if (!seen[col]) {
                lo[col] = hi[col] = a;
                seen[col] = true;
            } else {
                lo[col] = std::min(lo[col], a);
                hi[col] = std::max(hi[col], a);
            }
        }
        for (int c = 0; c <= kPlotW; ++c) {
            if (!seen[c]) continue;
            pts += fmt::format("{},{:.2f} ", kLeft + c, ypos(hi[c]));
            if (lo[c] != hi[c]) pts += fmt::format("{},{:.2f} ", kLeft + c, ypos(lo[c]));
        }
        if (!pts.empty()) pts.pop_back();
        out += fmt::format("<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"0.8\" points=\"{}\"/>\n", pts);

        const double span = fmax - fmin;
        const double step = span > 400 ? 50.0 : span > 100 ? 20.0 : span > 40 ? 5.0 : 1.0;
        for (double f = std::ceil(fmin / step) * step; f <= fmax; f += step) {
            const double x = xpos(f);
            out += fmt::format("<line x1=\"{:.2f}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{}\" stroke=\"black\"/>\n", x,
                               y0 + kPlotH, x, y0 + kPlotH + 5);
            out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:g}</text>\n", x, y0 + kPlotH + 18,
                               f);
        }
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">Hz</text>\n", kLeft + kPlotW / 2,
                           y0 + kPlotH + 34);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace lqfetch
