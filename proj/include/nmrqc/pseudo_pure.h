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

#ifndef NMRQC_PSEUDO_PURE_H_
#define NMRQC_PSEUDO_PURE_H_

#include <string>
#include <utility>
#include <vector>

#include "nmrqc/acquisition.h"
#include "nmrqc/engine.h"

namespace nmrqc {

// Basis labels are bit strings, spin 1 first: "01" is spin 1 in |0>, spin 2 in |1>.
bool valid_bits(const std::string& bits);
unsigned bits_to_index(const std::string& bits);
std::string index_to_bits(int n, unsigned index);

// Sum over nonempty spin subsets S of prod_{k in S} (-1)^{b_k} times the
// I_z product operator on S. Supports n <= 4.
POExpansion basic_pp_po(const std::string& bits);
DensityState basic_pp_state(const SpinSystem& s, const std::string& bits);

// [pi/3]_x^2, grad, [s1 pi/4]_x^1, cdelay 1/(2J), [-s2 pi/4]_y^1, grad.
// Equilibrium goes to (I_z^1 + I_z^2 + s1 s2 2 I_z^1 I_z^2) / 2.
InstructionList prep_pp2(const SpinSystem& s, int sign1 = +1, int sign2 = +1);

// Four stages, each ending in a gradient; the last leaves |000> pseudo-pure.
// Needs all three couplings of a three-spin system.
std::vector<InstructionList> prep_pp3_stages(const SpinSystem& s);
InstructionList prep_pp3(const SpinSystem& s);

struct PPIdentification {
    bool ok = false;
    std::string bits;
    bool negated = false;     // state is minus the basic state
    double confidence = 0.0;  // smallest main-peak share over the readouts
    std::vector<std::pair<std::string, double>> candidates;  // by overlap, best first
    std::string message;
};

// Decodes a basic pseudo-pure state from simulated soft [pi/2]_y readouts of
// each spin: line position gives the other spins' bits, line sign the
// spin's own bit (and the overall sign).
PPIdentification identify_pp_state(const DensityState& rho, const AcquisitionParams& p = {});

// tr(I_z^k rho_pp) / tr(I_z^k rho_eq).
double polarization_ratio(const DensityState& pp, int k);
double polarization_bound(int n);  // n / (2^n - 1)

}  // namespace nmrqc

#endif  // NMRQC_PSEUDO_PURE_H_
