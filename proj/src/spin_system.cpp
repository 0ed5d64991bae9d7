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

#include "lqfetch/spin_system.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "lqfetch/error.hpp"

namespace lqfetch {
namespace {

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

bool valid_label(std::string_view label) {
    return !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

}  // namespace

SpinSystem::SpinSystem(std::vector<Spin> spins, std::vector<double> j_hz, std::vector<int> bit_signs)
    : spins_(std::move(spins)), j_hz_(std::move(j_hz)) {
    const std::size_t m = spins_.size();
    if (m == 0) {
        throw ValidationError("spin system needs at least the ancilla");
    }
    if (m > 63) {
        throw ValidationError("spin system too large (" + std::to_string(m) + " spins)");
    }
    std::set<std::string> labels;
    for (const Spin &s : spins_) {
        if (!valid_label(s.label)) {
            throw ValidationError("invalid spin label '" + s.label + "'");
        }
        if (!labels.insert(s.label).second) {
            throw ValidationError("duplicate spin label '" + s.label + "'");
        }
        if (!(s.gamma_rel > 0.0) || !std::isfinite(s.gamma_rel)) {
            throw ValidationError("spin " + s.label + ": gamma_rel must be positive");
        }
        if (!std::isfinite(s.offset_hz)) {
            throw ValidationError("spin " + s.label + ": offset_hz must be finite");
        }
        if (s.multiplicity < 1 || s.multiplicity % 2 == 0) {
            throw ValidationError("spin " + s.label + ": multiplicity must be a positive odd integer");
        }
    }
    if (spins_[0].multiplicity != 1) {
        throw ValidationError("the ancilla must be a single spin-1/2");
    }
    if (j_hz_.size() != m * m) {
        throw ValidationError("coupling matrix has " + std::to_string(j_hz_.size()) + " entries, expected " +
                              std::to_string(m * m));
    }
    for (std::size_t a = 0; a < m; ++a) {
        if (j_hz_[a * m + a] != 0.0) {
            throw ValidationError("coupling matrix diagonal must be zero (spin " + spins_[a].label + ")");
        }
        for (std::size_t b = a + 1; b < m; ++b) {
            const double ab = j_hz_[a * m + b];
            const double ba = j_hz_[b * m + a];
            if (!std::isfinite(ab) || !std::isfinite(ba)) {
                throw ValidationError("non-finite coupling");
            }
            if (ab != ba) {
                throw ValidationError(fmt::format("asymmetric coupling {}-{}: {} vs {}", spins_[a].label,
                                                  spins_[b].label, ab, ba));
            }
        }
    }

    if (!bit_signs.empty() && bit_signs.size() != m) {
        throw ValidationError("bit_signs must have one entry per spin");
    }
    bit_signs_.assign(m, 1);
    for (std::size_t q = 1; q < m; ++q) {
        const double j0 = j_hz_[q];
        if (!bit_signs.empty()) {
            const int given = bit_signs[q];
            if (given != 1 && given != -1) {
                throw ValidationError("bit sign of " + spins_[q].label + " must be +1 or -1");
            }
            if (j0 != 0.0 && given != sign_of(j0)) {
                throw ValidationError("bit sign of " + spins_[q].label + " contradicts the sign of its ancilla coupling");
            }
            bit_signs_[q] = given;
        } else if (j0 != 0.0) {
            bit_signs_[q] = sign_of(j0);
        }
    }
}

std::uint64_t SpinSystem::engine_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t q = 1; q < spins_.size(); ++q) {
        if (bit_signs_[q] < 0) {
            mask |= std::uint64_t{1} << item_bit(q);
        }
    }
    return mask;
}

std::size_t SpinSystem::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < spins_.size(); ++i) {
        if (spins_[i].label == label) {
            return i;
        }
    }
    throw ValidationError("unknown spin label '" + std::string(label) + "'");
}

SpinSystem SpinSystem::with_coupling(std::size_t a, std::size_t b, double hz) const {
    const std::size_t m = spins_.size();
    if (a >= m || b >= m || a == b) {
        throw IndexError("with_coupling: bad spin pair");
    }
    std::vector<double> j = j_hz_;
    j[a * m + b] = hz;
    j[b * m + a] = hz;
    std::vector<int> signs;
    if (a != 0 && b != 0) {
        signs = bit_signs_;
    }
    return SpinSystem(spins_, std::move(j), std::move(signs));
}

SpinSystem crotonic_default() {
    const auto carbon = [](std::string label) { return Spin{std::move(label), Species::carbon, "", 1.0, 0.0, 1}; };
    const auto proton = [](std::string label, int mult) {
        return Spin{std::move(label), Species::proton, "", kProtonGammaRel, 0.0, mult};
    };
    std::vector<Spin> spins{carbon("C2"), proton("H1", 1), carbon("C3"), carbon("C1"),
                            proton("H3", 3), carbon("C4"), proton("H2", 1)};
    const std::vector<double> j0{156.0, 69.7, 41.6, -7.1, 1.4, -0.7};
    const std::size_t m = spins.size();
    std::vector<double> j(m * m, 0.0);
    for (std::size_t q = 1; q < m; ++q) {
        j[q] = j0[q - 1];
        j[q * m] = j0[q - 1];
    }
    return SpinSystem(std::move(spins), std::move(j));
}

// ---------------------------------------------------------------------------
// Config text

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view text, std::size_t line) {
    double v = 0.0;
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError(fmt::format("line {}: expected a number, got '{}'", line, text));
    }
    return v;
}

int parse_int(std::string_view text, std::size_t line) {
    int v = 0;
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(fmt::format("line {}: expected an integer, got '{}'", line, text));
    }
    return v;
}

struct SpinEntry {
    Spin spin;
    std::optional<double> gamma;
    std::optional<int> bit_sign;
    std::size_t line = 0;
};

}  // namespace

SpinSystem load_spin_system(std::string_view text) {
    std::vector<SpinEntry> entries;
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> couplings;
    std::optional<std::string> ancilla;
    enum class Section { top, spin, couplings } section = Section::top;

    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(fmt::format("line {}: unterminated section header", line_no));
            }
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name == "couplings") {
                section = Section::couplings;
            } else if (name.starts_with("spin.")) {
                const std::string label(trim(name.substr(5)));
                if (!valid_label(label)) {
                    throw ParseError(fmt::format("line {}: invalid spin label '{}'", line_no, label));
                }
                for (const SpinEntry &e : entries) {
                    if (e.spin.label == label) {
                        throw ParseError(fmt::format("line {}: duplicate spin section '{}'", line_no, label));
                    }
                }
                SpinEntry e;
                e.spin.label = label;
                e.line = line_no;
                entries.push_back(std::move(e));
                section = Section::spin;
            } else {
                throw ParseError(fmt::format("line {}: unknown section [{}]", line_no, name));
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(fmt::format("line {}: expected 'key = value'", line_no));
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError(fmt::format("line {}: empty key or value", line_no));
        }

        switch (section) {
            case Section::top:
                if (key != "ancilla") {
                    throw ParseError(fmt::format("line {}: unknown key '{}'", line_no, key));
                }
                ancilla = std::string(value);
                break;
            case Section::spin: {
                SpinEntry &e = entries.back();
                if (key == "species") {
                    if (value == "carbon") {
                        e.spin.species = Species::carbon;
                    } else if (value == "proton") {
                        e.spin.species = Species::proton;
                    } else {
                        e.spin.species = Species::other;
                        e.spin.species_name = std::string(value);
                    }
                } else if (key == "gamma_rel") {
                    e.gamma = parse_double(value, line_no);
                } else if (key == "offset_hz") {
                    e.spin.offset_hz = parse_double(value, line_no);
                } else if (key == "multiplicity") {
                    e.spin.multiplicity = parse_int(value, line_no);
                } else if (key == "bit_sign") {
                    e.bit_sign = parse_int(value, line_no);
                } else {
                    throw ParseError(fmt::format("line {}: unknown spin key '{}'", line_no, key));
                }
                break;
            }
            case Section::couplings: {
                const auto dash = key.find('-');
                if (dash == std::string_view::npos) {
                    throw ParseError(fmt::format("line {}: coupling key must be <labelA>-<labelB>", line_no));
                }
                std::string a(trim(key.substr(0, dash)));
                std::string b(trim(key.substr(dash + 1)));
                if (!valid_label(a) || !valid_label(b)) {
                    throw ParseError(fmt::format("line {}: bad coupling key '{}'", line_no, key));
                }
                if (couplings.count({a, b}) != 0) {
                    throw ParseError(fmt::format("line {}: coupling {} given twice", line_no, key));
                }
                couplings[{a, b}] = {parse_double(value, line_no), line_no};
                break;
            }
        }
    }

    if (!ancilla) {
        throw ParseError("missing 'ancilla = <label>'");
    }
    const auto anc = std::find_if(entries.begin(), entries.end(),
                                  [&](const SpinEntry &e) { return e.spin.label == *ancilla; });
    if (anc == entries.end()) {
        throw ParseError("ancilla '" + *ancilla + "' has no [spin." + *ancilla + "] section");
    }
    std::rotate(entries.begin(), anc, anc + 1);

    std::vector<Spin> spins;
    std::vector<int> signs;
    bool any_sign = false;
    for (SpinEntry &e : entries) {
        if (e.gamma) {
            e.spin.gamma_rel = *e.gamma;
        } else if (e.spin.species == Species::carbon) {
            e.spin.gamma_rel = 1.0;
        } else if (e.spin.species == Species::proton) {
            e.spin.gamma_rel = kProtonGammaRel;
        } else {
            throw ParseError(fmt::format("line {}: spin '{}' of species '{}' needs gamma_rel", e.line,
                                         e.spin.label, e.spin.species_name));
        }
        signs.push_back(e.bit_sign.value_or(0));
        any_sign = any_sign || e.bit_sign.has_value();
        spins.push_back(e.spin);
    }

    const std::size_t m = spins.size();
    const auto index = [&](const std::string &label, std::size_t line) {
        for (std::size_t i = 0; i < m; ++i) {
            if (spins[i].label == label) {
                return i;
            }
        }
        throw ParseError(fmt::format("line {}: coupling names unknown spin '{}'", line, label));
    };
    std::vector<double> j(m * m, 0.0);
    std::vector<bool> seen(m * m, false);
    for (const auto &[pair, entry] : couplings) {
        const auto [hz, line] = entry;
        const std::size_t a = index(pair.first, line);
        const std::size_t b = index(pair.second, line);
        if (a == b) {
            throw ValidationError(fmt::format("line {}: self-coupling of '{}'", line, pair.first));
        }
        j[a * m + b] = hz;
        seen[a * m + b] = true;
        if (!seen[b * m + a]) {
            j[b * m + a] = hz;
        }
    }

    if (any_sign) {
        // Unspecified signs fall back to the ancilla coupling sign (or +1).
        for (std::size_t q = 1; q < m; ++q) {
            if (signs[q] == 0) {
                signs[q] = j[q] < 0.0 ? -1 : 1;
            }
        }
        if (signs[0] != 0) {
            throw ValidationError("the ancilla has no bit_sign");
        }
        signs[0] = 1;
    } else {
        signs.clear();
    }
    return SpinSystem(std::move(spins), std::move(j), std::move(signs));
}

SpinSystem load_spin_system_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open spin-system file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_spin_system(buf.str());
}

std::string save_spin_system(const SpinSystem &sys) {
    std::string out = fmt::format("ancilla = {}\n", sys.spin(0).label);
    for (std::size_t i = 0; i < sys.num_spins(); ++i) {
        const Spin &s = sys.spin(i);
        out += fmt::format("\n[spin.{}]\n", s.label);
        switch (s.species) {
            case Species::carbon:
                out += "species = carbon\n";
                break;
            case Species::proton:
                out += "species = proton\n";
                break;
            case Species::other:
                out += fmt::format("species = {}\n", s.species_name);
                break;
        }
        out += fmt::format("gamma_rel = {:.17g}\noffset_hz = {:.17g}\nmultiplicity = {}\n", s.gamma_rel,
                           s.offset_hz, s.multiplicity);
        if (i > 0) {
            out += fmt::format("bit_sign = {}\n", sys.bit_signs()[i]);
        }
    }
    out += "\n[couplings]\n";
    for (std::size_t a = 0; a < sys.num_spins(); ++a) {
        for (std::size_t b = a + 1; b < sys.num_spins(); ++b) {
            if (sys.j(a, b) != 0.0) {
                out += fmt::format("{}-{} = {:.17g}\n", sys.spin(a).label, sys.spin(b).label, sys.j(a, b));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Query patterns

QueryPattern QueryPattern::parse(std::string_view text) {
    std::vector<Constraint> c;
    c.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case '0':
                c.push_back(Constraint::zero);
                break;
            case '1':
                c.push_back(Constraint::one);
                break;
            case 'x':
            case 'X':
            case '*':
                c.push_back(Constraint::wild);
                break;
            default:
                throw ParseError(fmt::format("pattern '{}': unexpected character '{}'", text, ch));
        }
    }
    return QueryPattern(std::move(c));
}

bool QueryPattern::unconstrained() const {
    return std::all_of(constraints_.begin(), constraints_.end(), [](Constraint c) { return c == Constraint::wild; });
}

bool QueryPattern::matches(std::uint64_t item) const {
    const std::size_t n = constraints_.size();
    for (std::size_t k = 0; k < n; ++k) {
        const bool bit = (item >> (n - 1 - k)) & 1U;
        switch (constraints_[k]) {
            case Constraint::zero:
                if (bit) {
                    return false;
                }
                break;
            case Constraint::one:
                if (!bit) {
                    return false;
                }
                break;
            case Constraint::wild:
                break;
        }
    }
    return true;
}

std::string QueryPattern::str() const {
    std::string s;
    for (Constraint c : constraints_) {
        s += c == Constraint::zero ? '0' : c == Constraint::one ? '1' : 'x';
    }
    return s;
}

// ---------------------------------------------------------------------------

DecodabilityReport check_decodability(const SpinSystem &sys, double resolution_hz) {
    if (!(resolution_hz > 0.0)) {
        throw ValidationError("resolution_hz must be positive");
    }
    const std::size_t n = sys.num_db_qubits();
    if (n > 24) {
        throw ValidationError("check_decodability enumerates 2^n items; n = " + std::to_string(n) + " is too large");
    }
    DecodabilityReport report;
    const std::uint64_t items = std::uint64_t{1} << n;
    report.frequencies_hz.resize(items);
    for (std::uint64_t b = 0; b < items; ++b) {
        double nu = 0.0;
        for (std::size_t q = 1; q <= n; ++q) {
            const double bit = static_cast<double>((b >> sys.item_bit(q)) & 1U);
            nu += (1.0 - 2.0 * bit) * std::abs(sys.j(0, q)) / 2.0;
        }
        report.frequencies_hz[b] = nu;
    }

    std::vector<std::uint64_t> order(items);
    for (std::uint64_t b = 0; b < items; ++b) {
        order[b] = b;
    }
    std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
        return report.frequencies_hz[a] < report.frequencies_hz[b];
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t k = i + 1; k < order.size(); ++k) {
            if (report.frequencies_hz[order[k]] - report.frequencies_hz[order[i]] >= resolution_hz) {
                break;
            }
            report.collisions.emplace_back(std::min(order[i], order[k]), std::max(order[i], order[k]));
        }
    }
    std::sort(report.collisions.begin(), report.collisions.end());

    report.superincreasing = true;
    for (std::size_t q = 1; q <= n; ++q) {
        double tail = 0.0;
        for (std::size_t r = q + 1; r <= n; ++r) {
            tail += std::abs(sys.j(0, r));
        }
        if (!(std::abs(sys.j(0, q)) > tail)) {
            report.superincreasing = false;
        }
    }
    report.ok = report.collisions.empty();
    return report;
}

}  // namespace lqfetch
