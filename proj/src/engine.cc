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

#include "nmrqc/engine.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nmrqc {

const char* axis_name(PulseAxis a) {
    switch (a) {
        case PulseAxis::X:
            return "x";
        case PulseAxis::Y:
            return "y";
        case PulseAxis::MinusX:
            return "-x";
        default:
            return "-y";
    }
}

DensityState make_state(const SpinSystem& s, Matrix rho) {
    if (rho.rows() != Eigen::Index(dim_of(s.n())) || rho.cols() != rho.rows()) {
        throw ShapeError("density matrix does not match a " + std::to_string(s.n()) + "-spin system");
    }
    return DensityState{std::move(rho), std::make_shared<const SpinSystem>(s)};
}

DensityState equilibrium_state(const SpinSystem& s) { return make_state(s, equilibrium_matrix(s.n())); }

DensityState state_from_po(const SpinSystem& s, const POExpansion& po) {
    if (po.n() != s.n()) throw ShapeError("product-operator expansion has the wrong spin count");
    return make_state(s, po.matrix());
}

namespace {

double signed_angle(PulseAxis axis, double angle) {
    return (axis == PulseAxis::MinusX || axis == PulseAxis::MinusY) ? -angle : angle;
}

bool is_y(PulseAxis axis) { return axis == PulseAxis::Y || axis == PulseAxis::MinusY; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string angle_text(double a) { return fmt(a / std::numbers::pi) + "pi"; }

Matrix diag_exp(const Eigen::VectorXd& energies, double t) {
    Vector d(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i) d(i) = std::polar(1.0, -energies(i) * t);
    return d.asDiagonal();
}

std::vector<int> all_spins(int n) {
    std::vector<int> v;
    for (int k = 1; k <= n; ++k) v.push_back(k);
    return v;
}

}  // namespace

std::string describe(const Instruction& ins) {
    return std::visit(
        [](auto&& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Pulse>) {
                std::string spins;
                for (int k : x.spins) spins += (spins.empty() ? "" : ",") + std::to_string(k);
                return "[" + angle_text(x.angle) + "]_" + axis_name(x.axis) + "^{" + spins + "}";
            } else if constexpr (std::is_same_v<T, TransitionPulse>) {
                return "[" + angle_text(x.angle) + "]_" + axis_name(x.axis) + "^{levels " +
                       std::to_string(x.level_a) + "," + std::to_string(x.level_b) + "}";
            } else if constexpr (std::is_same_v<T, FreeEvolution>) {
                return "delay " + fmt(x.seconds) + " s";
            } else if constexpr (std::is_same_v<T, CouplingDelay>) {
                return "coupling delay " + fmt(x.seconds) + " s";
            } else if constexpr (std::is_same_v<T, ZRotation>) {
                return "[" + angle_text(x.angle) + "]_z^" + std::to_string(x.spin);
            } else if constexpr (std::is_same_v<T, Gradient>) {
                return "grad";
            } else {
                std::string s = "averaged coupling window " + fmt(x.seconds) + " s {";
                for (auto& t : x.targets) s += " J" + std::to_string(t.k) + std::to_string(t.l) + "=" + fmt(t.hz);
                return s + " }";
            }
        },
        ins);
}

std::pair<unsigned, unsigned> transition_levels(int n, int k, bool plus) {
    if (k < 1 || k > n) throw InapplicableError("transition spin " + std::to_string(k) + " not in system");
    unsigned all = dim_of(n) - 1;
    unsigned bit = 1u << (n - k);
    unsigned others = plus ? (all & ~bit) : 0u;
    return {others, others | bit};
}

std::pair<unsigned, unsigned> transition_levels(int n, unsigned a, unsigned b) {
    unsigned d = dim_of(n);
    if (a >= d || b >= d) throw InapplicableError("transition level outside the basis");
    unsigned diff = a ^ b;
    if (std::popcount(diff) != 1) {
        throw InapplicableError("levels " + std::to_string(a) + " and " + std::to_string(b) +
                                " differ in " + std::to_string(std::popcount(diff)) + " bits, need exactly 1");
    }
    return (a & diff) ? std::pair{b, a} : std::pair{a, b};
}

Matrix rotation_2x2(PulseAxis axis, double angle) {
    double th = signed_angle(axis, angle);
    double c = std::cos(th / 2), s = std::sin(th / 2);
    Matrix r(2, 2);
    if (is_y(axis)) {
        r << c, -s, s, c;
    } else {
        r << c, cd(0, -s), cd(0, -s), c;
    }
    return r;
}

Propagator pulse_propagator(int n, const Pulse& p) {
    if (p.spins.empty()) throw InapplicableError("pulse needs at least one spin");
    std::vector<bool> on(n + 1, false);
    for (int k : p.spins) {
        if (k < 1 || k > n) throw InapplicableError("pulse spin " + std::to_string(k) + " not in system");
        on[k] = true;
    }
    Matrix r = rotation_2x2(p.axis, p.angle);
    Matrix id = Matrix::Identity(2, 2);
    Matrix u = Matrix::Identity(1, 1);
    for (int k = 1; k <= n; ++k) u = kron(u, on[k] ? r : id);
    return {u, {describe(p)}};
}

Propagator transition_propagator(int n, const TransitionPulse& p) {
    auto [a, b] = transition_levels(n, p.level_a, p.level_b);
    Matrix r = rotation_2x2(p.axis, p.angle);
    Matrix u = Matrix::Identity(dim_of(n), dim_of(n));
    u(a, a) = r(0, 0);
    u(a, b) = r(0, 1);
    u(b, a) = r(1, 0);
    u(b, b) = r(1, 1);
    return {u, {describe(p)}};
}

Propagator free_propagator(const SpinSystem& s, double t) {
    return {diag_exp(hamiltonian_diagonal(s), t), {describe(FreeEvolution{t})}};
}

Propagator coupling_evolution(const SpinSystem& s, double t) {
    return {diag_exp(coupling_hamiltonian_diagonal(s), t), {"J evolution " + fmt(t) + " s"}};
}

Propagator coupling_delay_propagator(const SpinSystem& s, double t) {
    Matrix half = free_propagator(s, t / 2).u;
    Matrix pi_y = pulse_propagator(s.n(), Pulse{all_spins(s.n()), PulseAxis::Y, std::numbers::pi}).u;
    return {pi_y * half * pi_y * half, {describe(CouplingDelay{t})}};
}

Propagator coupling_delay_single_refocus(const SpinSystem& s, double t) {
    Matrix half = free_propagator(s, t / 2).u;
    Matrix pi_y = pulse_propagator(s.n(), Pulse{all_spins(s.n()), PulseAxis::Y, std::numbers::pi}).u;
    return {half * pi_y * half, {"single-refocus coupling delay " + fmt(t) + " s"}};
}

Propagator zrotation_propagator(int n, int k, double angle) {
    Matrix iz = angular_momentum_op(n, k, Axis::Z);
    Vector d(dim_of(n));
    for (unsigned i = 0; i < dim_of(n); ++i) d(i) = std::polar(1.0, -angle * iz(i, i).real());
    return {d.asDiagonal(), {describe(ZRotation{k, angle})}};
}

Propagator propagator(const Instruction& ins, const SpinSystem& s) {
    int n = s.n();
    return std::visit(
        [&](auto&& x) -> Propagator {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Pulse>) {
                return pulse_propagator(n, x);
            } else if constexpr (std::is_same_v<T, TransitionPulse>) {
                return transition_propagator(n, x);
            } else if constexpr (std::is_same_v<T, FreeEvolution>) {
                return free_propagator(s, x.seconds);
            } else if constexpr (std::is_same_v<T, CouplingDelay>) {
                return coupling_delay_propagator(s, x.seconds);
            } else if constexpr (std::is_same_v<T, ZRotation>) {
                if (x.spin < 1 || x.spin > n) throw InapplicableError("z-rotation spin not in system");
                return zrotation_propagator(n, x.spin, x.angle);
            } else if constexpr (std::is_same_v<T, Gradient>) {
                throw InapplicableError("a gradient has no propagator");
            } else {
                throw InapplicableError("averaged coupling window must be expanded first");
            }
        },
        ins);
}

Propagator sequence_propagator(const InstructionList& ins, const SpinSystem& s) {
    std::vector<Propagator> props;
    for (const Instruction& i : expand_instructions(ins, s)) props.push_back(propagator(i, s));
    if (props.empty()) return {identity(s.n()), {}};
    return compose(props);
}

Matrix conjugate(const Matrix& u, const Matrix& rho) {
    Matrix out = u * rho * u.adjoint();
    return (out + out.adjoint()) * 0.5;
}

DensityState apply(const Propagator& p, const DensityState& rho) {
    return DensityState{conjugate(p.u, rho.rho), rho.system};
}

DensityState execute(const Instruction& ins, const DensityState& rho) {
    if (std::holds_alternative<Gradient>(ins)) return gradient_project(rho);
    if (std::holds_alternative<AveragedCouplingWindow>(ins)) {
        return execute(expand_instructions({ins}, *rho.system), rho);
    }
    return apply(propagator(ins, *rho.system), rho);
}

DensityState execute(const InstructionList& ins, const DensityState& rho) {
    DensityState cur = rho;
    for (const Instruction& i : ins) cur = execute(i, cur);
    return cur;
}

DensityState evolve_free(const DensityState& rho, double t) { return apply(free_propagator(*rho.system, t), rho); }

DensityState apply_pulse(const DensityState& rho, const std::vector<int>& spins, PulseAxis axis, double angle) {
    return apply(pulse_propagator(rho.n(), Pulse{spins, axis, angle}), rho);
}

DensityState apply_transition_pulse(const DensityState& rho, unsigned a, unsigned b, PulseAxis axis,
                                    double angle) {
    return apply(transition_propagator(rho.n(), TransitionPulse{a, b, axis, angle}), rho);
}

DensityState coupling_delay(const DensityState& rho, double t) {
    return apply(coupling_delay_propagator(*rho.system, t), rho);
}

DensityState cs_delay(const DensityState& rho, int k, double angle) {
    return apply(zrotation_propagator(rho.n(), k, angle), rho);
}

int coherence_order(int n, unsigned row, unsigned col) {
    unsigned mask = dim_of(n) - 1;
    return std::popcount(~row & mask) - std::popcount(~col & mask);
}

Matrix gradient_project(const Matrix& rho) {
    int n = spin_count_for_dim(rho.rows());
    Matrix out = rho;
    for (Eigen::Index r = 0; r < rho.rows(); ++r)
        for (Eigen::Index c = 0; c < rho.cols(); ++c)
            if (coherence_order(n, unsigned(r), unsigned(c)) != 0) out(r, c) = 0.0;
    return out;
}

DensityState gradient_project(const DensityState& rho) { return DensityState{gradient_project(rho.rho), rho.system}; }

Propagator compose(const std::vector<Propagator>& props) {
    if (props.empty()) throw ShapeError("compose needs at least one propagator");
    Propagator out{props.front().u, props.front().provenance};
    for (size_t i = 1; i < props.size(); ++i) {
        if (props[i].u.rows() != out.u.rows()) throw ShapeError("propagator dimensions differ");
        out.u = props[i].u * out.u;
        out.provenance.insert(out.provenance.end(), props[i].provenance.begin(), props[i].provenance.end());
    }
    return out;
}

PhaseMatch equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol) {
    PhaseMatch m;
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        m.residual = INFINITY;
        return m;
    }
    cd overlap = (b.adjoint() * a).trace();
    m.phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cd(1.0);
    m.residual = (a - m.phase * b).cwiseAbs().maxCoeff();
    m.equal = m.residual < tol;
    return m;
}

}  // namespace nmrqc
