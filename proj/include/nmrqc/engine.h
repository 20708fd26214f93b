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

#ifndef NMRQC_ENGINE_H_
#define NMRQC_ENGINE_H_

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nmrqc/spin_algebra.h"
#include "nmrqc/spin_system.h"

namespace nmrqc {

// Pulse phases. MinusX and MinusY negate the rotation angle.
enum class PulseAxis { X, Y, MinusX, MinusY };

const char* axis_name(PulseAxis a);

struct DensityState {
    Matrix rho;
    std::shared_ptr<const SpinSystem> system;

    int n() const { return system->n(); }
    POExpansion po() const { return po_decompose(rho, n()); }
};

DensityState make_state(const SpinSystem& s, Matrix rho);
DensityState equilibrium_state(const SpinSystem& s);
DensityState state_from_po(const SpinSystem& s, const POExpansion& po);

struct Propagator {
    Matrix u;
    std::vector<std::string> provenance;
};

// Engine instructions. Spins are 1-based.
struct Pulse {
    std::vector<int> spins;
    PulseAxis axis = PulseAxis::X;
    double angle = 0.0;
};

// Rotation on the two levels a, b (basis indices differing in one bit);
// level a carries bit 0 on the flipped spin.
struct TransitionPulse {
    unsigned level_a = 0;
    unsigned level_b = 0;
    PulseAxis axis = PulseAxis::Y;
    double angle = 0.0;
};

struct FreeEvolution {
    double seconds = 0.0;
};

// Coupling-only evolution: t/2 - [pi]_y^all - t/2 - [pi]_y^all, which
// cancels the shifts and leaves exp(-i t H_J) up to a global sign.
struct CouplingDelay {
    double seconds = 0.0;
};

// Rotation of spin k about z; couplings and other shifts refocused.
struct ZRotation {
    int spin = 1;
    double angle = 0.0;
};

// Ideal gradient: removes every element of nonzero coherence order.
struct Gradient {};

// Coupling window whose effective couplings are rescaled by inverting the
// listed spins for part of the window. Expanded by expand_instructions().
struct CouplingTarget {
    int k = 1;
    int l = 2;
    double hz = 0.0;
};
struct AveragedCouplingWindow {
    double seconds = 0.0;
    std::vector<CouplingTarget> targets;
    std::vector<int> invertible;
};

using Instruction = std::variant<Pulse, TransitionPulse, FreeEvolution, CouplingDelay, ZRotation,
                                 Gradient, AveragedCouplingWindow>;
using InstructionList = std::vector<Instruction>;

std::string describe(const Instruction& ins);

struct InapplicableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (+k): other spins all 1; (-k): other spins all 0.
std::pair<unsigned, unsigned> transition_levels(int n, int k, bool plus);
// Explicit pair; throws InapplicableError unless they differ in one bit.
std::pair<unsigned, unsigned> transition_levels(int n, unsigned a, unsigned b);

// One-spin rotation exp(-i angle sigma_axis / 2).
Matrix rotation_2x2(PulseAxis axis, double angle);

Propagator pulse_propagator(int n, const Pulse& p);
Propagator transition_propagator(int n, const TransitionPulse& p);
Propagator free_propagator(const SpinSystem& s, double t);
Propagator coupling_evolution(const SpinSystem& s, double t);  // exp(-i t H_J), no composite
Propagator coupling_delay_propagator(const SpinSystem& s, double t);
Propagator coupling_delay_single_refocus(const SpinSystem& s, double t);
Propagator zrotation_propagator(int n, int k, double angle);

// Throws for Gradient and unexpanded AveragedCouplingWindow.
Propagator propagator(const Instruction& ins, const SpinSystem& s);

// Replaces every AveragedCouplingWindow by pulses and coupling delays.
InstructionList expand_instructions(const InstructionList& ins, const SpinSystem& s);

// Product of all instruction propagators (later instructions on the left).
// Throws InapplicableError if the list contains a gradient.
Propagator sequence_propagator(const InstructionList& ins, const SpinSystem& s);

Matrix conjugate(const Matrix& u, const Matrix& rho);

DensityState apply(const Propagator& p, const DensityState& rho);
DensityState execute(const Instruction& ins, const DensityState& rho);
DensityState execute(const InstructionList& ins, const DensityState& rho);

DensityState evolve_free(const DensityState& rho, double t);
DensityState apply_pulse(const DensityState& rho, const std::vector<int>& spins, PulseAxis axis, double angle);
DensityState apply_transition_pulse(const DensityState& rho, unsigned a, unsigned b, PulseAxis axis, double angle);
DensityState coupling_delay(const DensityState& rho, double t);
DensityState cs_delay(const DensityState& rho, int k, double angle);
DensityState gradient_project(const DensityState& rho);
Matrix gradient_project(const Matrix& rho);

int coherence_order(int n, unsigned row, unsigned col);

Propagator compose(const std::vector<Propagator>& props);

struct PhaseMatch {
    bool equal = false;
    cd phase = 1.0;
    double residual = 0.0;
};

// Finds the unit c minimizing ||A - c B||_F and reports the max-norm residual.
PhaseMatch equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol = 1e-8);

}  // namespace nmrqc

#endif  // NMRQC_ENGINE_H_
