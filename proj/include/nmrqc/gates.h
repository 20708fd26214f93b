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

#ifndef NMRQC_GATES_H_
#define NMRQC_GATES_H_

#include <optional>
#include <string>
#include <vector>

#include "nmrqc/engine.h"

namespace nmrqc {

// A named gate: the pulse recipe plus an independent reference matrix.
//
// Reference matrices are kept in the textbook form U, acting on density
// matrices as rho -> U^dag rho U. Engine propagators act as rho -> P rho P^dag,
// so a correct recipe satisfies P = c U^dag for some unit c.
struct GateSpec {
    std::string name;
    std::vector<int> targets;  // output spin first, then controls
    InstructionList recipe;
    std::optional<Matrix> reference;
    InstructionList phase_fix_before;
    InstructionList phase_fix_after;

    Matrix reference_propagator() const { return reference->adjoint(); }
    InstructionList phase_fixed_recipe() const;
};

// Hard-coded reference matrices (two or three spins, output on spin 1).
namespace reference {
Matrix xor_po();
Matrix xor_qc();
Matrix sqrt_xor_po();
Matrix sqrt_xor_qc();
Matrix xor_sc();
Matrix toffoli_sc();
Matrix toffoli_qc();
}  // namespace reference

GateSpec gate_xor_po(const SpinSystem& s, int k, bool plus = true);
GateSpec gate_conditional_rotation(const SpinSystem& s, int k, double angle);
GateSpec gate_sqrt_xor_po(const SpinSystem& s, int k);
GateSpec gate_xor_qc(const SpinSystem& s, int k);
GateSpec gate_sqrt_xor_qc(const SpinSystem& s, int k);
// control = 0 picks the other spin of a two-spin system.
GateSpec gate_xor_sc(const SpinSystem& s, int k, int control = 0);
GateSpec gate_toffoli_sc(const SpinSystem& s, int k, int c1, int c2);

// Window with a soft [pi] inversion of spin l at fraction (1 + target/J)/2,
// so J_kl averages to target over the window.
InstructionList average_coupling(const SpinSystem& s, int k, int l, double window, double target_hz);

struct GeneratorResult {
    POExpansion theta;
    bool branch_ambiguous = false;
};

// Theta with U = exp(i pi Theta), eigenphases taken in (-pi, pi] and
// ties at -pi sent to +pi.
Matrix generator_matrix(const Matrix& u, bool* branch_ambiguous = nullptr);
GeneratorResult generator_log(const Matrix& u);
GeneratorResult generator_log(const GateSpec& gate);

struct GateCheck {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    cd phase = 1.0;
};

// Recipe-vs-reference comparison for every gate in the library on the
// given system (two-spin and three-spin gates as applicable).
std::vector<GateCheck> verify_gate_library(const SpinSystem& two_spin, const SpinSystem& three_spin,
                                           double tol = 1e-8);

}  // namespace nmrqc

#endif  // NMRQC_GATES_H_
