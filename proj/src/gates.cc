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

#include "nmrqc/gates.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nmrqc {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0, 1);

Matrix mat4(std::initializer_list<cd> v) {
    Matrix m(4, 4);
    auto it = v.begin();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = *it++;
    return m;
}

// Places a reference matrix written for spins (1..m) onto system spins
// `roles` (roles[i] plays reference spin i+1); identity on the rest.
Matrix embed(const Matrix& ref, int n, const std::vector<int>& roles) {
    int m = spin_count_for_dim(ref.rows());
    unsigned d = dim_of(n);
    auto sub = [&](unsigned state) {
        unsigned s = 0;
        for (int i = 0; i < m; ++i) s |= unsigned(spin_bit(n, state, roles[i])) << (m - 1 - i);
        return s;
    };
    unsigned role_mask = 0;
    for (int k : roles) role_mask |= 1u << (n - k);
    Matrix out = Matrix::Zero(d, d);
    for (unsigned r = 0; r < d; ++r)
        for (unsigned c = 0; c < d; ++c)
            if ((r & ~role_mask) == (c & ~role_mask)) out(r, c) = ref(sub(r), sub(c));
    return out;
}

void check_spin(const SpinSystem& s, int k, const std::string& what) {
    if (k < 1 || k > s.n()) {
        throw InapplicableError(what + " spin " + std::to_string(k) + " is outside 1.." + std::to_string(s.n()));
    }
}

int other_spin(const SpinSystem& s, int k, int control) {
    if (control != 0) {
        check_spin(s, control, "control");
        if (control == k) throw InapplicableError("control and output spin coincide");
        return control;
    }
    if (s.n() != 2) throw InapplicableError("a control spin must be named on systems with more than two spins");
    return k == 1 ? 2 : 1;
}

// Coupling window of length t keeping J(k, keep[i]) at hz[i] and
// decoupling every other spin coupled to k.
Instruction coupling_window(const SpinSystem& s, int k, const std::vector<int>& keep,
                            const std::vector<double>& hz, double t) {
    AveragedCouplingWindow w{t, {}, {}};
    bool trivial = true;
    for (size_t i = 0; i < keep.size(); ++i) {
        w.targets.push_back({k, keep[i], hz[i]});
        if (s.j(k, keep[i]) != hz[i]) {
            w.invertible.push_back(keep[i]);
            trivial = false;
        }
    }
    for (int j = 1; j <= s.n(); ++j) {
        if (j == k || std::find(keep.begin(), keep.end(), j) != keep.end()) continue;
        if (s.j(k, j) != 0.0) {
            w.targets.push_back({k, j, 0.0});
            w.invertible.push_back(j);
            trivial = false;
        }
    }
    if (trivial) return CouplingDelay{t};
    return w;
}

}  // namespace

InstructionList GateSpec::phase_fixed_recipe() const {
    InstructionList out = phase_fix_before;
    out.insert(out.end(), recipe.begin(), recipe.end());
    out.insert(out.end(), phase_fix_after.begin(), phase_fix_after.end());
    return out;
}

namespace reference {

Matrix xor_po() { return mat4({1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0}); }

Matrix xor_qc() { return mat4({1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0}); }

// The levels untouched by the pulse keep unit diagonal entries.
Matrix sqrt_xor_po() {
    const double h = 1.0 / std::sqrt(2.0);
    return mat4({1, 0, 0, 0, 0, h, 0, h, 0, 0, 1, 0, 0, -h, 0, h});
}

Matrix sqrt_xor_qc() {
    return (1.0 + kI) / 2.0 * mat4({1.0 - kI, 0, 0, 0, 0, 1, 0, -kI, 0, 0, 1.0 - kI, 0, 0, -kI, 0, 1});
}

Matrix xor_sc() {
    return 1.0 / std::sqrt(2.0) * mat4({1.0 + kI, 0, 0, 0, 0, 0, 0, 1.0 + kI, 0, 0, 1.0 - kI, 0, 0, -1.0 + kI, 0, 0});
}

Matrix toffoli_sc() {
    const double r2 = std::sqrt(2.0);
    Matrix v = Matrix::Zero(8, 8);
    v(0, 0) = 1.0 + kI;
    v(1, 1) = r2 * kI;
    v(2, 2) = r2 * kI;
    v(3, 7) = 1.0 - kI;
    v(4, 4) = 1.0 - kI;
    v(5, 5) = -r2 * kI;
    v(6, 6) = -r2 * kI;
    v(7, 3) = -1.0 - kI;
    return -v / r2;
}

Matrix toffoli_qc() {
    Matrix v = Matrix::Zero(8, 8);
    for (int i : {0, 1, 2, 4, 5, 6}) v(i, i) = 1.0;
    v(3, 7) = 1.0;
    v(7, 3) = 1.0;
    return v;
}

}  // namespace reference

GateSpec gate_xor_po(const SpinSystem& s, int k, bool plus) {
    check_spin(s, k, "output");
    auto [a, b] = transition_levels(s.n(), k, plus);
    GateSpec g;
    g.name = std::string("XOR_PO") + (plus ? "+" : "-");
    g.targets = {k};
    g.recipe = {TransitionPulse{a, b, PulseAxis::Y, kPi}};
    if (s.n() == 2) {
        Matrix u = Matrix::Identity(4, 4);
        u(a, a) = 0.0;
        u(b, b) = 0.0;
        u(a, b) = 1.0;
        u(b, a) = -1.0;
        g.reference = u;
        if (plus) g.reference = embed(reference::xor_po(), 2, {k, k == 1 ? 2 : 1});
    }
    return g;
}

GateSpec gate_conditional_rotation(const SpinSystem& s, int k, double angle) {
    check_spin(s, k, "output");
    auto [a, b] = transition_levels(s.n(), k, true);
    GateSpec g;
    g.name = "CROT";
    g.targets = {k};
    g.recipe = {TransitionPulse{a, b, PulseAxis::Y, angle}};
    if (s.n() == 2) {
        std::vector<int> roles = {k, k == 1 ? 2 : 1};
        if (angle == kPi) {
            g.reference = embed(reference::xor_po(), 2, roles);
        } else if (angle == kPi / 2) {
            g.reference = embed(reference::sqrt_xor_po(), 2, roles);
        } else {
            double c = std::cos(angle / 2), sn = std::sin(angle / 2);
            Matrix u = Matrix::Identity(4, 4);
            u(a, a) = c;
            u(a, b) = sn;
            u(b, a) = -sn;
            u(b, b) = c;
            g.reference = u;
        }
    }
    return g;
}

GateSpec gate_sqrt_xor_po(const SpinSystem& s, int k) {
    GateSpec g = gate_conditional_rotation(s, k, kPi / 2);
    g.name = "SQRT_XOR_PO";
    return g;
}

GateSpec gate_xor_qc(const SpinSystem& s, int k) {
    check_spin(s, k, "output");
    if (s.n() != 2) throw InapplicableError("XOR_QC is defined for two-spin systems");
    int c = k == 1 ? 2 : 1;
    auto [a, b] = transition_levels(2, k, true);
    GateSpec g;
    g.name = "XOR_QC";
    g.targets = {k, c};
    g.recipe = {TransitionPulse{a, b, PulseAxis::X, -kPi}, ZRotation{c, -kPi / 2}};
    g.reference = embed(reference::xor_qc(), 2, {k, c});
    return g;
}

GateSpec gate_sqrt_xor_qc(const SpinSystem& s, int k) {
    check_spin(s, k, "output");
    if (s.n() != 2) throw InapplicableError("SQRT_XOR_QC is defined for two-spin systems");
    int c = k == 1 ? 2 : 1;
    auto [a, b] = transition_levels(2, k, true);
    GateSpec g;
    g.name = "SQRT_XOR_QC";
    g.targets = {k, c};
    g.recipe = {TransitionPulse{a, b, PulseAxis::X, -kPi / 2}, ZRotation{c, -kPi / 4}};
    g.reference = embed(reference::sqrt_xor_qc(), 2, {k, c});
    return g;
}

GateSpec gate_xor_sc(const SpinSystem& s, int k, int control) {
    check_spin(s, k, "output");
    int c = other_spin(s, k, control);
    double jkc = s.j(k, c);
    if (jkc == 0.0) {
        throw InapplicableError("XOR_SC needs J(" + std::to_string(k) + "," + std::to_string(c) + ") != 0");
    }
    GateSpec g;
    g.name = "XOR_SC";
    g.targets = {k, c};
    double t = 1.0 / (2.0 * std::abs(jkc));
    g.recipe = {Pulse{{k}, PulseAxis::Y, kPi / 2}, coupling_window(s, k, {c}, {jkc}, t),
                Pulse{{k}, PulseAxis::X, kPi / 2}};
    g.phase_fix_before = {ZRotation{c, kPi / 2}};
    g.phase_fix_after = {ZRotation{k, -kPi / 2}};
    if (s.n() == 2) g.reference = embed(reference::xor_sc(), 2, {k, c});
    return g;
}

GateSpec gate_toffoli_sc(const SpinSystem& s, int k, int c1, int c2) {
    check_spin(s, k, "output");
    check_spin(s, c1, "control");
    check_spin(s, c2, "control");
    if (k == c1 || k == c2 || c1 == c2) throw InapplicableError("TOF_SC needs three distinct spins");
    double j1 = s.j(k, c1), j2 = s.j(k, c2);
    if (j1 == 0.0 || j2 == 0.0) {
        throw InapplicableError("TOF_SC needs both controls coupled to spin " + std::to_string(k));
    }
    // The control with the larger coupling is averaged down to the smaller.
    double jeff = std::abs(j1) < std::abs(j2) ? j1 : j2;
    double t = 1.0 / (4.0 * std::abs(jeff));
    Instruction d = coupling_window(s, k, {c1, c2}, {jeff, jeff}, t);
    GateSpec g;
    g.name = "TOF_SC";
    g.targets = {k, c1, c2};
    g.recipe = {Pulse{{k}, PulseAxis::Y, kPi / 2}, d, Pulse{{k}, PulseAxis::Y, kPi / 2}, d,
                Pulse{{k}, PulseAxis::X, -kPi / 2}, d, Pulse{{k}, PulseAxis::X, -kPi / 2}};
    if (s.n() == 3) g.reference = embed(reference::toffoli_sc(), 3, {k, c1, c2});
    return g;
}

InstructionList average_coupling(const SpinSystem& s, int k, int l, double window, double target_hz) {
    check_spin(s, k, "coupled");
    check_spin(s, l, "inverted");
    AveragedCouplingWindow w{window, {{k, l, target_hz}}, {l}};
    return expand_instructions({w}, s);
}

Matrix generator_matrix(const Matrix& u, bool* branch_ambiguous) {
    Eigen::ComplexEigenSolver<Matrix> es(u);
    Vector theta(u.rows());
    bool tie = false;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        double ph = std::arg(es.eigenvalues()(i));
        if (std::abs(std::abs(ph) - kPi) < 1e-9) {
            ph = kPi;
            tie = true;
        }
        theta(i) = ph / kPi;
    }
    if (branch_ambiguous) *branch_ambiguous = tie;
    const Matrix& v = es.eigenvectors();
    return v * theta.asDiagonal() * v.inverse();
}

GeneratorResult generator_log(const Matrix& u) {
    GeneratorResult r;
    Matrix theta = generator_matrix(u, &r.branch_ambiguous);
    r.theta = po_decompose(theta).pruned(1e-12);
    return r;
}

GeneratorResult generator_log(const GateSpec& gate) {
    if (!gate.reference) throw InapplicableError(gate.name + " has no reference matrix on this system");
    return generator_log(*gate.reference);
}

std::vector<GateCheck> verify_gate_library(const SpinSystem& two, const SpinSystem& three, double tol) {
    std::vector<GateCheck> out;
    auto check = [&](const std::string& name, const InstructionList& recipe, const SpinSystem& s, const Matrix& ref) {
        Matrix p = sequence_propagator(recipe, s).u;
        PhaseMatch m = equal_up_to_global_phase(p, ref.adjoint(), tol);
        out.push_back({name, m.equal, m.residual, m.phase});
    };
    for (int k : {1, 2}) {
        std::string sfx = "^" + std::to_string(k);
        GateSpec po = gate_xor_po(two, k, true);
        check("XOR_PO+" + sfx, po.recipe, two, *po.reference);
        GateSpec pom = gate_xor_po(two, k, false);
        check("XOR_PO-" + sfx, pom.recipe, two, *pom.reference);
        GateSpec sp = gate_sqrt_xor_po(two, k);
        check("SQRT_XOR_PO" + sfx, sp.recipe, two, *sp.reference);
        GateSpec qc = gate_xor_qc(two, k);
        check("XOR_QC" + sfx, qc.recipe, two, *qc.reference);
        GateSpec sq = gate_sqrt_xor_qc(two, k);
        check("SQRT_XOR_QC" + sfx, sq.recipe, two, *sq.reference);
        GateSpec sc = gate_xor_sc(two, k);
        check("XOR_SC" + sfx, sc.recipe, two, *sc.reference);
        check("XOR_SC phase-fixed vs XOR_QC" + sfx, sc.phase_fixed_recipe(), two, *qc.reference);
        InstructionList twice = sq.recipe;
        twice.insert(twice.end(), sq.recipe.begin(), sq.recipe.end());
        check("SQRT_XOR_QC squared vs XOR_QC" + sfx, twice, two, *qc.reference);
        InstructionList po_twice = sp.recipe;
        po_twice.insert(po_twice.end(), sp.recipe.begin(), sp.recipe.end());
        check("SQRT_XOR_PO squared vs XOR_PO" + sfx, po_twice, two, *po.reference);
    }
    GateSpec tof = gate_toffoli_sc(three, 1, 2, 3);
    if (tof.reference) check("TOF_SC^1", tof.recipe, three, *tof.reference);
    return out;
}

}  // namespace nmrqc
