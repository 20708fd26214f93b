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

#include <cmath>
#include <numbers>

#include "nmrqc/dsl.h"
#include "nmrqc/gates.h"
#include "nmrqc/pseudo_pure.h"

namespace nmrqc::dsl {

namespace {

constexpr double kPi = std::numbers::pi;

struct CompileFailure {
    std::string message;
};

class Compiler {
  public:
    explicit Compiler(const SpinSystem& s) : s_(s) {}

    CompiledProgram run(const PulseProgram& p) {
        CompiledProgram out;
        std::vector<Diagnostic> errors;
        for (size_t i = 0; i < p.statements.size(); ++i) {
            const Statement& st = p.statements[i];
            try {
                if (const auto* a = std::get_if<AcquireStmt>(&st.body)) {
                    if (i + 1 != p.statements.size()) throw CompileFailure{"acquire must be the last statement"};
                    if (a->points <= 0) throw CompileFailure{"acquire needs a positive point count"};
                    double dwell = seconds(a->dwell);
                    if (dwell <= 0) throw CompileFailure{"acquire needs a positive dwell time"};
                    out.acquire = AcquireSpec{a->points, dwell};
                    continue;
                }
                InstructionList ins = std::visit([&](const auto& x) { return lower(x); }, st.body);
                out.instructions.insert(out.instructions.end(), ins.begin(), ins.end());
            } catch (const CompileFailure& f) {
                errors.push_back({f.message, st.span, true});
            } catch (const InapplicableError& e) {
                errors.push_back({e.what(), st.span, true});
            } catch (const ParameterError& e) {
                errors.push_back({e.what(), st.span, true});
            }
        }
        if (!errors.empty()) throw DiagnosticError(errors);
        return out;
    }

  private:
    const SpinSystem& s_;

    int spin(int k) const {
        if (k < 1 || k > s_.n()) {
            throw CompileFailure{"spin " + std::to_string(k) + " is outside 1.." + std::to_string(s_.n())};
        }
        return k;
    }

    double seconds(const Duration& d) const {
        if (!d.symbolic) return d.seconds;
        spin(d.k);
        spin(d.l);
        if (d.k == d.l) throw CompileFailure{"J(" + std::to_string(d.k) + "," + std::to_string(d.l) + ") needs two different spins"};
        double j = s_.j(d.k, d.l);
        if (j == 0.0) {
            throw CompileFailure{"division by zero coupling: J(" + std::to_string(d.k) + "," + std::to_string(d.l) +
                                 ") is 0 Hz"};
        }
        if (d.factor <= 0.0) throw CompileFailure{"coupling factor must be positive"};
        return 1.0 / (d.factor * std::abs(j));
    }

    InstructionList lower(const PulseStmt& p) const {
        Pulse out{{}, p.axis, p.angle.radians()};
        if (p.all) {
            for (int k = 1; k <= s_.n(); ++k) out.spins.push_back(k);
        } else {
            for (int k : p.spins) out.spins.push_back(spin(k));
        }
        return {out};
    }

    InstructionList lower(const TPulseStmt& p) const {
        std::pair<unsigned, unsigned> lv;
        if (p.mode == TPulseStmt::Mode::Levels) {
            for (const std::string* b : {&p.level_a, &p.level_b}) {
                if (int(b->size()) != s_.n()) {
                    throw CompileFailure{"level '" + *b + "' does not have " + std::to_string(s_.n()) + " bits"};
                }
            }
            lv = transition_levels(s_.n(), bits_to_index(p.level_a), bits_to_index(p.level_b));
        } else {
            lv = transition_levels(s_.n(), spin(p.spin), p.mode == TPulseStmt::Mode::Plus);
        }
        return {TransitionPulse{lv.first, lv.second, p.axis, p.angle.radians()}};
    }

    InstructionList lower(const DelayStmt& d) const {
        double t = seconds(d.duration);
        if (d.refocus.empty()) return {FreeEvolution{t}};
        std::vector<int> ref;
        for (int k : d.refocus) ref.push_back(spin(k));
        return {FreeEvolution{t / 2}, Pulse{ref, PulseAxis::X, kPi}, FreeEvolution{t / 2},
                Pulse{ref, PulseAxis::MinusX, kPi}};
    }

    InstructionList lower(const CDelayStmt& d) const { return {CouplingDelay{seconds(d.duration)}}; }

    InstructionList lower(const ZRotStmt& z) const { return {ZRotation{spin(z.spin), z.angle.radians()}}; }

    InstructionList lower(const GradStmt&) const { return {Gradient{}}; }

    InstructionList lower(const AcquireStmt&) const { return {}; }

    InstructionList lower(const GateStmt& g) const {
        int out = 0;
        std::vector<int> ctrl;
        std::optional<double> angle;
        bool plus = true;
        int sign1 = 1, sign2 = 1;
        for (const GateArg& a : g.args) {
            if (a.key == "out") {
                out = spin(a.integer);
            } else if (a.key == "ctrl") {
                ctrl.push_back(spin(a.integer));
            } else if (a.key == "angle") {
                angle = a.angle.radians();
            } else if (a.key == "variant") {
                plus = a.word == "plus";
            } else if (a.key == "flip") {
                (a.word == "x" ? sign1 : sign2) *= -1;
            }
        }
        auto need_out = [&] {
            if (out == 0) throw CompileFailure{"gate " + g.name + " needs 'out'"};
            return out;
        };
        if (g.name == "XOR_PO") return gate_xor_po(s_, need_out(), plus).recipe;
        if (g.name == "CROT") {
            if (!angle) throw CompileFailure{"gate CROT needs 'angle'"};
            return gate_conditional_rotation(s_, need_out(), *angle).recipe;
        }
        if (g.name == "SQRT_XOR_PO") return gate_sqrt_xor_po(s_, need_out()).recipe;
        if (g.name == "XOR_QC") return gate_xor_qc(s_, need_out()).recipe;
        if (g.name == "SQRT_XOR_QC") return gate_sqrt_xor_qc(s_, need_out()).recipe;
        if (g.name == "XOR_SC") {
            if (ctrl.size() > 1) throw CompileFailure{"gate XOR_SC takes one 'ctrl'"};
            return gate_xor_sc(s_, need_out(), ctrl.empty() ? 0 : ctrl[0]).recipe;
        }
        if (g.name == "TOF_SC") {
            if (ctrl.size() != 2) throw CompileFailure{"gate TOF_SC needs two 'ctrl' spins"};
            return gate_toffoli_sc(s_, need_out(), ctrl[0], ctrl[1]).recipe;
        }
        if (g.name == "PP2_PREP") return prep_pp2(s_, sign1, sign2);
        if (g.name == "PP3_PREP") return prep_pp3(s_);
        throw CompileFailure{"unknown gate '" + g.name + "'"};
    }
};

// Spins of one colour class of a 2-colouring of the coupling graph.
std::vector<int> coupling_colour_class(const SpinSystem& s) {
    const int n = s.n();
    std::vector<int> colour(n + 1, -1);
    for (int start = 1; start <= n; ++start) {
        if (colour[start] >= 0) continue;
        colour[start] = 0;
        std::vector<int> stack = {start};
        while (!stack.empty()) {
            int k = stack.back();
            stack.pop_back();
            for (int l = 1; l <= n; ++l) {
                if (l == k || s.j(k, l) == 0.0) continue;
                if (colour[l] < 0) {
                    colour[l] = 1 - colour[k];
                    stack.push_back(l);
                } else if (colour[l] == colour[k]) {
                    throw InapplicableError("coupling network is not bipartite; delays cannot be inverted");
                }
            }
        }
    }
    std::vector<int> out;
    for (int k = 1; k <= n; ++k)
        if (colour[k] == 1) out.push_back(k);
    return out;
}

}  // namespace

InitialState InitialState::pseudo_pure(std::string bits) {
    InitialState s;
    s.kind = Kind::PseudoPure;
    s.bits = std::move(bits);
    return s;
}

InitialState InitialState::explicit_po(POExpansion po) {
    InitialState s;
    s.kind = Kind::Explicit;
    s.po = std::move(po);
    return s;
}

DensityState initial_density(const InitialState& init, const SpinSystem& s) {
    switch (init.kind) {
        case InitialState::Kind::PseudoPure: return basic_pp_state(s, init.bits);
        case InitialState::Kind::Explicit:
            if (init.po.n() != s.n()) throw ParameterError("initial state has the wrong number of spins");
            return state_from_po(s, init.po);
        case InitialState::Kind::Equilibrium: break;
    }
    return equilibrium_state(s);
}

CompiledProgram compile_program(const PulseProgram& p, const SpinSystem& s) { return Compiler(s).run(p); }

RunResult run_program(const PulseProgram& p, const SpinSystem& s, const InitialState& init,
                      const AcquisitionParams& acq) {
    CompiledProgram c = compile_program(p, s);
    RunResult r{execute(c.instructions, initial_density(init, s)), std::nullopt, std::nullopt};
    if (c.acquire) {
        r.fid = simulate_fid(r.final_state, c.acquire->points, c.acquire->dwell_s);
        r.spectrum = fft_spectrum(*r.fid, acq.apodize ? acq.line_broadening_hz : 0.0, acq.zero_fill);
    }
    return r;
}

InstructionList inverse(const InstructionList& ins, const SpinSystem& s) {
    std::optional<std::vector<int>> flip;
    auto flipped_cdelay = [&](double t) -> InstructionList {
        if (!flip) flip = coupling_colour_class(s);
        if (flip->empty()) return {CouplingDelay{t}};
        return {Pulse{*flip, PulseAxis::X, kPi}, CouplingDelay{t}, Pulse{*flip, PulseAxis::X, -kPi}};
    };
    std::vector<int> all;
    for (int k = 1; k <= s.n(); ++k) all.push_back(k);

    InstructionList out;
    for (auto it = ins.rbegin(); it != ins.rend(); ++it) {
        InstructionList step = std::visit(
            [&](const auto& x) -> InstructionList {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Pulse>) {
                    return {Pulse{x.spins, x.axis, -x.angle}};
                } else if constexpr (std::is_same_v<T, TransitionPulse>) {
                    return {TransitionPulse{x.level_a, x.level_b, x.axis, -x.angle}};
                } else if constexpr (std::is_same_v<T, ZRotation>) {
                    return {ZRotation{x.spin, -x.angle}};
                } else if constexpr (std::is_same_v<T, CouplingDelay>) {
                    return flipped_cdelay(x.seconds);
                } else if constexpr (std::is_same_v<T, FreeEvolution>) {
                    // Shifts reversed by a hard pi about x; couplings by the flipped cdelay.
                    InstructionList v = {Pulse{all, PulseAxis::X, kPi}, FreeEvolution{x.seconds},
                                         Pulse{all, PulseAxis::X, -kPi}};
                    InstructionList c = flipped_cdelay(2 * x.seconds);
                    v.insert(v.end(), c.begin(), c.end());
                    return v;
                } else if constexpr (std::is_same_v<T, AveragedCouplingWindow>) {
                    return inverse(expand_instructions({x}, s), s);
                } else {
                    throw InapplicableError("gradients cannot be inverted");
                }
            },
            *it);
        out.insert(out.end(), step.begin(), step.end());
    }
    return out;
}

}  // namespace nmrqc::dsl
