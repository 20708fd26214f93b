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

// Coupling averaging by time-shared spin inversion.
//
// While spin i is inverted its couplings change sign, so over a window the
// effective J_kl is J_kl * <s_k s_l>, the average taken over the fraction of
// time spent in each inversion pattern s. The pattern weights follow from the
// requested averages by a Walsh expansion over the invertible spins; averages
// that are not requested are set to zero.

#include <bit>
#include <cmath>
#include <map>
#include <numbers>

#include "nmrqc/engine.h"

namespace nmrqc {

namespace {

InstructionList expand_window(const AveragedCouplingWindow& w, const SpinSystem& s) {
    int m = int(w.invertible.size());
    if (m > 4) throw InapplicableError("at most four spins can be time-shared in one window");
    std::map<int, int> slot;  // spin -> bit position among invertible spins
    for (int i = 0; i < m; ++i) {
        int k = w.invertible[i];
        if (k < 1 || k > s.n()) throw InapplicableError("inverted spin " + std::to_string(k) + " not in system");
        slot[k] = i;
    }

    std::map<unsigned, double> walsh = {{0u, 1.0}};
    for (const CouplingTarget& t : w.targets) {
        if (t.k < 1 || t.k > s.n() || t.l < 1 || t.l > s.n() || t.k == t.l) {
            throw InapplicableError("bad coupling pair " + std::to_string(t.k) + "," + std::to_string(t.l));
        }
        double actual = s.j(t.k, t.l);
        std::string pair = "J(" + std::to_string(t.k) + "," + std::to_string(t.l) + ")";
        if (actual == 0.0) {
            if (t.hz != 0.0) throw InapplicableError(pair + " is zero and cannot be averaged to a nonzero value");
            continue;
        }
        double ratio = t.hz / actual;
        if (std::abs(ratio) > 1.0 + 1e-12) {
            throw InapplicableError("unreachable coupling: |target " + pair + "| exceeds |" + std::to_string(actual) +
                                    "| Hz");
        }
        unsigned mask = 0;
        if (slot.count(t.k)) mask |= 1u << slot[t.k];
        if (slot.count(t.l)) mask |= 1u << slot[t.l];
        auto it = walsh.find(mask);
        if (it != walsh.end()) {
            if (std::abs(it->second - ratio) > 1e-12) {
                throw InapplicableError("unreachable coupling: " + pair + " conflicts with another target");
            }
            continue;
        }
        walsh[mask] = ratio;
    }

    unsigned patterns = 1u << m;
    std::vector<double> weight(patterns, 0.0);
    for (unsigned p = 0; p < patterns; ++p) {
        double acc = 0.0;
        for (auto& [mask, c] : walsh) acc += (std::popcount(p & mask) % 2 ? -c : c);
        weight[p] = acc / patterns;
        if (weight[p] < -1e-12) throw InapplicableError("unreachable coupling combination for this window");
        weight[p] = std::max(weight[p], 0.0);
    }

    InstructionList out;
    unsigned current = 0;
    auto toggle = [&](unsigned target) {
        for (int i = 0; i < m; ++i) {
            unsigned bit = 1u << i;
            if ((current ^ target) & bit) {
                bool invert = target & bit;
                out.push_back(Pulse{{w.invertible[i]}, invert ? PulseAxis::X : PulseAxis::MinusX, std::numbers::pi});
            }
        }
        current = target;
    };
    for (unsigned g = 0; g < patterns; ++g) {
        unsigned p = g ^ (g >> 1);
        if (weight[p] <= 1e-15) continue;
        toggle(p);
        out.push_back(CouplingDelay{weight[p] * w.seconds});
    }
    toggle(0);
    return out;
}

}  // namespace

InstructionList expand_instructions(const InstructionList& ins, const SpinSystem& s) {
    InstructionList out;
    for (const Instruction& i : ins) {
        if (auto* w = std::get_if<AveragedCouplingWindow>(&i)) {
            InstructionList e = expand_window(*w, s);
            out.insert(out.end(), e.begin(), e.end());
        } else {
            out.push_back(i);
        }
    }
    return out;
}

}  // namespace nmrqc
