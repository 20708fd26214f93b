// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nmrqc/pseudo_pure.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace nmrqc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_bits(int n, const std::string& bits) {
    if (!valid_bits(bits)) throw ParameterError("basis label must be a string of 0/1, got '" + bits + "'");
    if (int(bits.size()) != n) {
        throw ParameterError("basis label '" + bits + "' does not match " + std::to_string(n) + " spins");
    }
}

}  // namespace

bool valid_bits(const std::string& bits) {
    return !bits.empty() && int(bits.size()) <= kMaxSpins &&
           std::all_of(bits.begin(), bits.end(), [](char c) { return c == '0' || c == '1'; });
}

unsigned bits_to_index(const std::string& bits) {
    unsigned v = 0;
    for (char c : bits) v = (v << 1) | unsigned(c == '1');
    return v;
}

std::string index_to_bits(int n, unsigned index) {
    std::string out(n, '0');
    for (int k = 1; k <= n; ++k) out[k - 1] = spin_bit(n, index, k) ? '1' : '0';
    return out;
}

POExpansion basic_pp_po(const std::string& bits) {
    if (!valid_bits(bits)) throw ParameterError("basis label must be a string of 0/1, got '" + bits + "'");
    const int n = int(bits.size());
    if (n > 4) throw ParameterError("basic pseudo-pure states are supported for up to 4 spins");
    POExpansion po(n);
    for (unsigned subset = 1; subset < dim_of(n); ++subset) {
        std::string label(n, '1');
        double sign = 1.0;
        for (int k = 0; k < n; ++k) {
            if (subset & (1u << (n - 1 - k))) {
                label[k] = 'z';
                if (bits[k] == '1') sign = -sign;
            }
        }
        po.set(label, sign);
    }
    return po;
}

DensityState basic_pp_state(const SpinSystem& s, const std::string& bits) {
    require_bits(s.n(), bits);
    return make_state(s, basic_pp_po(bits).matrix());
}

InstructionList prep_pp2(const SpinSystem& s, int sign1, int sign2) {
    if (s.n() != 2) throw InapplicableError("two-spin preparation needs a two-spin system");
    double j = s.j(1, 2);
    if (j == 0.0) throw InapplicableError("two-spin preparation needs J(1,2) != 0");
    double s1 = sign1 < 0 ? -1.0 : 1.0, s2 = sign2 < 0 ? -1.0 : 1.0;
    return {Pulse{{2}, PulseAxis::X, kPi / 3},
            Gradient{},
            Pulse{{1}, PulseAxis::X, s1 * kPi / 4},
            CouplingDelay{1.0 / (2.0 * std::abs(j))},
            Pulse{{1}, PulseAxis::Y, -s2 * kPi / 4},
            Gradient{}};
}

std::vector<InstructionList> prep_pp3_stages(const SpinSystem& s) {
    if (s.n() != 3) throw InapplicableError("three-spin preparation needs a three-spin system");
    double j12 = s.j(1, 2), j13 = s.j(1, 3), j23 = s.j(2, 3);
    if (j12 == 0.0 || j13 == 0.0 || j23 == 0.0) {
        throw InapplicableError("three-spin preparation needs J(1,2), J(1,3) and J(2,3) all nonzero");
    }
    // Largest common value J(1,3) = J(2,3) reachable while J(1,2) is removed.
    double j = j13 * j23 / (j13 + j23);
    if (!(j > 0.0) && !(j < 0.0)) throw InapplicableError("couplings to spin 3 cannot be equalized");

    AveragedCouplingWindow w2{1.0 / (2.0 * std::abs(j12)), {{1, 3, 0.0}, {2, 3, 0.0}}, {3}};
    std::vector<CouplingTarget> t34 = {{1, 2, 0.0}, {1, 3, j}, {2, 3, j}};
    AveragedCouplingWindow w3{1.0 / (2.0 * std::abs(j)), t34, {1, 2}};
    AveragedCouplingWindow w4{1.0 / (4.0 * std::abs(j)), t34, {1, 2}};

    return {
        {Pulse{{1}, PulseAxis::Y, std::acos(0.25)}, Pulse{{2}, PulseAxis::Y, kPi / 3}, Gradient{}},
        {Pulse{{2}, PulseAxis::Y, kPi / 4}, w2, Pulse{{2}, PulseAxis::X, kPi / 4}, Gradient{}},
        {Pulse{{3}, PulseAxis::Y, kPi / 4}, w3, Pulse{{3}, PulseAxis::Y, kPi / 4}, Gradient{}},
        {Pulse{{3}, PulseAxis::Y, kPi / 4}, w4, Pulse{{3}, PulseAxis::X, kPi / 4}, Gradient{}},
    };
}

InstructionList prep_pp3(const SpinSystem& s) {
    InstructionList out;
    for (const InstructionList& st : prep_pp3_stages(s)) out.insert(out.end(), st.begin(), st.end());
    return out;
}

PPIdentification identify_pp_state(const DensityState& rho, const AcquisitionParams& p) {
    const SpinSystem& s = *rho.system;
    const int n = s.n();
    PPIdentification out;

    // Overlap ranking, reported whatever the decode outcome.
    Matrix traceless = shift_and_scale(rho.rho);
    double rn = traceless.norm();
    std::vector<std::pair<std::string, double>> ranked;
    if (n <= 4) {
        for (unsigned b = 0; b < dim_of(n); ++b) {
            std::string bits = index_to_bits(n, b);
            Matrix ref = basic_pp_po(bits).matrix();
            double ov = rn > 0 ? (ref.adjoint() * traceless).trace().real() / (ref.norm() * rn) : 0.0;
            ranked.push_back({bits, ov});
        }
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
        if (ranked.size() > 3) ranked.resize(3);
    }
    out.candidates = ranked;

    auto fail = [&](const std::string& why) {
        out.ok = false;
        out.message = "ambiguous state: " + why;
        return out;
    };

    std::vector<int> bit(n + 1, -1);
    std::vector<std::vector<int>> votes(n + 1);
    std::vector<int> global(n + 1, 0);
    std::vector<int> own_sign(n + 1, 0);
    double confidence = 1.0;
    for (int k = 1; k <= n; ++k) {
        DensityState r = apply_pulse(rho, {k}, PulseAxis::Y, kPi / 2);
        Spectrum spec = acquire(r, p);
        PeakList peaks = pick_peaks(spec);
        if (peaks.empty()) return fail("no signal after the readout of spin " + std::to_string(k));
        const double tol = std::max(3.0 * spec.spacing_hz(), 0.25);

        // Transitions of spin k, one per configuration of the other spins.
        unsigned kbit = 1u << (n - k);
        std::map<unsigned, double> weight;
        double total = 0.0;
        for (const Peak& pk : peaks) {
            double best = 1e300;
            unsigned cfg = 0;
            for (unsigned a = 0; a < dim_of(n); ++a) {
                if (a & kbit) continue;
                double dist = std::abs(transition_frequency_hz(s, k, a) - pk.frequency_hz);
                if (dist < best) {
                    best = dist;
                    cfg = a;
                }
            }
            total += std::abs(pk.amplitude);
            if (best > tol) continue;
            weight[cfg] += pk.amplitude;
        }
        if (weight.empty()) return fail("readout of spin " + std::to_string(k) + " shows no line of that spin");
        auto main = std::max_element(weight.begin(), weight.end(), [](const auto& a, const auto& b) {
            return std::abs(a.second) < std::abs(b.second);
        });
        double share = std::abs(main->second) / total;
        confidence = std::min(confidence, share);
        if (share < 0.9) {
            return fail("readout of spin " + std::to_string(k) + " shows more than one line");
        }
        for (int j = 1; j <= n; ++j) {
            if (j != k) votes[j].push_back(spin_bit(n, main->first, j));
        }
        own_sign[k] = main->second > 0 ? 1 : -1;
    }

    for (int j = 1; j <= n; ++j) {
        if (votes[j].empty()) return fail("single-spin systems cannot be decoded from line positions");
        if (std::any_of(votes[j].begin(), votes[j].end(), [&](int v) { return v != votes[j][0]; })) {
            return fail("readouts disagree on the state of spin " + std::to_string(j));
        }
        bit[j] = votes[j][0];
        global[j] = own_sign[j] * (bit[j] ? -1 : 1);
    }
    for (int j = 2; j <= n; ++j) {
        if (global[j] != global[1]) return fail("line signs are inconsistent with a single basis state");
    }

    out.ok = true;
    out.bits.clear();
    for (int j = 1; j <= n; ++j) out.bits += bit[j] ? '1' : '0';
    out.negated = global[1] < 0;
    out.confidence = confidence;
    out.message = std::string(out.negated ? "-" : "") + "|" + out.bits + ">";
    return out;
}

double polarization_ratio(const DensityState& pp, int k) {
    const int n = pp.n();
    Matrix iz = angular_momentum_op(n, k, Axis::Z);
    double num = (iz * pp.rho).trace().real();
    double den = (iz * equilibrium_matrix(n)).trace().real();
    return num / den;
}

double polarization_bound(int n) { return double(n) / double((1u << n) - 1); }

}  // namespace nmrqc
