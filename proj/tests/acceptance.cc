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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "nmrqc/dsl.h"
#include "nmrqc/experiments.h"
#include "nmrqc/pseudo_pure.h"
#include "nmrqc/verification.h"
#include "oracles.h"

using namespace nmrqc;

namespace {

constexpr double kPi = oracle::kPi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix terms(const oracle::Terms& t, int n) { return oracle::matrix(t, n); }

double maxabs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

SpinSystem ideal_three() { return make_spin_system("ideal", {-150, 0, 150}, {{1, 2, 5.0}, {1, 3, 5.0}}); }

Outcome propagator_correctness() {
    auto t0 = std::chrono::steady_clock::now();
    SpinSystem s = dibromothiophene();
    Matrix h = oracle::hamiltonian(s.offsets_hz, {{{1, 2}, s.j(1, 2)}});
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> time(0.0, 1.0);
    double worst = 0.0;
    int cases = 0;
    for (const std::string& l : all_labels(2)) {
        if (l == "11") continue;
        for (int i = 0; i < 100; ++i) {
            double t = time(rng);
            Matrix closed = terms(oracle::evolve({{l, 1.0}}, s.offsets_hz, {{{1, 2}, s.j(1, 2)}}, t), 2);
            Matrix u = oracle::expm(cd(0, -t) * h);
            Matrix exact = u * oracle::po(l) * u.adjoint();
            Matrix engine = evolve_free(make_state(s, oracle::po(l)), t).rho;
            worst = std::max({worst, maxabs(closed - exact), maxabs(engine - exact)});
            ++cases;
        }
    }
    double sec = seconds_since(t0);
    return {worst < 1e-10 && sec < 1.0 && cases == 1500,
            std::to_string(cases) + " cases, max error " + sci(worst) + " (tol 1e-10), " + sci(sec) + " s (limit 1 s)"};
}

Outcome tables() {
    SpinSystem s = dibromothiophene();
    auto prop = [&](const GateSpec& g) { return sequence_propagator(g.recipe, s).u; };
    int pass = 0, total = 0;
    double worst = 0.0;
    for (auto [u, t] : {std::pair{prop(gate_xor_po(s, 1)), &po_xor_table()},
                        {prop(gate_xor_qc(s, 1)), &qc_xor_table()},
                        {prop(gate_xor_sc(s, 1)), &sc_xor_table()}}) {
        for (const TableCheck& c : check_conjugation_table(u, *t, 1e-10)) {
            pass += c.pass;
            ++total;
            worst = std::max(worst, c.error);
        }
    }
    return {pass == 48 && total == 48,
            std::to_string(pass) + "/48 cells, max error " + sci(worst) + " (tol 1e-10)"};
}

Outcome gate_recipes() {
    std::vector<GateCheck> checks = verify_gate_library(dibromothiophene(), ideal_three(), 1e-8);
    double worst = 0.0;
    int pass = 0;
    for (const GateCheck& g : checks) {
        worst = std::max(worst, g.residual);
        pass += g.pass;
    }
    return {pass == int(checks.size()) && !checks.empty(), std::to_string(pass) + "/" + std::to_string(checks.size()) +
                                                               " recipes, max residual " + sci(worst) + " (tol 1e-8)"};
}

Outcome generators() {
    std::vector<GeneratorCheck> g = check_generators(1e-9);
    double worst = 0.0;
    int pass = 0;
    std::string note;
    for (const GeneratorCheck& c : g) {
        worst = std::max(worst, c.error);
        pass += c.pass;
        if (std::abs(c.identity_offset) > 1e-9) note += "; " + c.name + " identity term off by " + sci(c.identity_offset) + " (global phase)";
    }
    return {pass == 4, std::to_string(pass) + "/4 generators, max coefficient error " + sci(worst) + " (tol 1e-9)" + note};
}

Outcome toffoli() {
    SpinSystem s = chloronitrobenzene().subsystem({1, 2, 3});
    GateSpec g = gate_toffoli_sc(s, 1, 2, 3);
    Matrix p = sequence_propagator(expand_instructions(g.recipe, s), s).u;
    // Bits e1 e2 e3 with the output on spin 1: the two states with both
    // controls set trade places.
    int moved = 0;
    bool perm_ok = true;
    for (unsigned b = 0; b < 8; ++b) {
        DensityState out = make_state(s, conjugate(p, basic_pp_po(index_to_bits(3, b)).matrix()));
        unsigned want = (b & 3u) == 3u ? (b ^ 4u) : b;
        perm_ok = perm_ok && maxabs(out.rho - basic_pp_po(index_to_bits(3, want)).matrix()) < 1e-10;
        moved += want != b;
    }
    const std::vector<std::pair<std::string, oracle::Terms>> images = {
        {"z11", {{"z11", 0.5}, {"zz1", 0.5}, {"z1z", 0.5}, {"zzz", -0.5}}},
        {"1z1", {{"1z1", 1.0}}},
        {"11z", {{"11z", 1.0}}},
        {"zz1", {{"z11", 0.5}, {"zz1", 0.5}, {"z1z", -0.5}, {"zzz", 0.5}}},
        {"z1z", {{"z11", 0.5}, {"zz1", -0.5}, {"z1z", 0.5}, {"zzz", 0.5}}},
        {"1zz", {{"1zz", 1.0}}},
        {"zzz", {{"z11", -0.5}, {"zz1", 0.5}, {"z1z", 0.5}, {"zzz", 0.5}}},
    };
    double worst = 0.0;
    for (const auto& [in, out] : images) worst = std::max(worst, maxabs(conjugate(p, oracle::po(in)) - terms(out, 3)));
    return {perm_ok && moved == 2 && worst < 1e-10,
            std::string(perm_ok ? "|011> <-> |111> only" : "wrong permutation") + ", 7 images max error " + sci(worst) +
                " (tol 1e-10), J12 averaged 8.0 -> 1.5 Hz"};
}

Outcome pseudo_pure() {
    SpinSystem two = dibromothiophene();
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    const std::vector<oracle::Terms> lines2 = {
        {{"z1", 1}, {"1z", 0.5}, {"1y", -r3 / 2}},
        {{"z1", 1}, {"1z", 0.5}},
        {{"z1", 1 / r2}, {"1z", 0.5}, {"y1", -1 / r2}},
        {{"z1", 1 / r2}, {"1z", 0.5}, {"xz", 1 / r2}},
        {{"z1", 0.5}, {"1z", 0.5}, {"x1", -0.5}, {"xz", 0.5}, {"zz", 0.5}},
        {{"z1", 0.5}, {"1z", 0.5}, {"zz", 0.5}},
    };
    InstructionList seq = prep_pp2(two);
    DensityState rho = equilibrium_state(two);
    double worst = 0.0;
    for (size_t i = 0; i < seq.size() && i < lines2.size(); ++i) {
        rho = execute(seq[i], rho);
        worst = std::max(worst, maxabs(rho.rho - terms(lines2[i], 2)));
    }
    bool count_ok = seq.size() == lines2.size();
    double half = maxabs(rho.rho - 0.5 * basic_pp_po("00").matrix());
    auto f2 = pseudo_spinor_factor(rho.rho);
    bool rank2 = f2 && std::abs(std::abs(f2->amplitudes(0)) - 1.0) < 1e-10;

    SpinSystem three = chloronitrobenzene().subsystem({1, 2, 3});
    const std::vector<oracle::Terms> lines3 = {
        {{"z11", 0.25}, {"1z1", 0.5}, {"11z", 1}},
        {{"z11", 0.25}, {"1z1", 0.25}, {"11z", 1}, {"zz1", 0.25}},
        {{"z11", 0.25}, {"1z1", 0.25}, {"11z", 0.5}, {"zz1", 0.25}, {"zzz", 0.5}},
        {{"z11", 0.25}, {"1z1", 0.25}, {"11z", 0.25}, {"zz1", 0.25}, {"z1z", 0.25}, {"1zz", 0.25}, {"zzz", 0.25}},
    };
    DensityState r3s = equilibrium_state(three);
    auto stages = prep_pp3_stages(three);
    for (size_t i = 0; i < stages.size() && i < lines3.size(); ++i) {
        r3s = execute(stages[i], r3s);
        worst = std::max(worst, maxabs(r3s.rho - terms(lines3[i], 3)));
    }
    count_ok = count_ok && stages.size() == lines3.size();
    auto f3 = pseudo_spinor_factor(r3s.rho);
    bool rank3 = f3 && std::abs(std::abs(f3->amplitudes(0)) - 1.0) < 1e-10;
    return {count_ok && worst < 1e-10 && rank2 && rank3 && half < 1e-12,
            "max line error " + sci(worst) + " (tol 1e-10), rank 1 at |00>: " + (rank2 ? "yes" : "no") +
                ", at |000>: " + (rank3 ? "yes" : "no") + ", scale vs basic |00> = 0.5 (error " + sci(half) + ")"};
}

Outcome spectral_figures() {
    bool ok = true;
    std::string detail;
    double slowest = 0.0;
    for (const char* name : {"eq2_hard", "eq2_pox1", "pp2_prep", "eq4_tof1"}) {
        auto t0 = std::chrono::steady_clock::now();
        ExperimentResult r = run_experiment(name);
        double sec = seconds_since(t0);
        slowest = std::max(slowest, sec);
        ok = ok && r.ok() && sec < 5.0;
        int pass = 0;
        for (const Assertion& a : r.assertions) pass += a.pass;
        detail += std::string(name) + " " + std::to_string(pass) + "/" + std::to_string(r.assertions.size());
        if (r.metrics.count("amplitude_ratio")) detail += " (ratio " + sci(r.metrics.at("amplitude_ratio")) + ")";
        detail += ", ";
    }
    return {ok, detail + "slowest " + sci(slowest) + " s (limit 5 s), one-bin tolerance 0.244 Hz"};
}

Outcome entanglement() {
    SpinSystem s = shifted_dibromothiophene();
    DensityState e = entangled_state(s);
    double state_err = maxabs(e.rho - terms({{"xx", 1}, {"yy", -1}, {"zz", 1}}, 2));
    Fid f = simulate_fid(e, 4096, 1e-3);
    double fid_max = 0.0;
    for (cd z : f.samples) fid_max = std::max(fid_max, std::abs(z));
    // rho(|00>,|11>) goes as exp(-i (w1 + w2) t).
    double w = 2 * kPi * (s.offsets_hz[0] + s.offsets_hz[1]);
    double worst_rel = 0.0;
    for (double t : {1e-4, 7e-4, 1.3e-3}) {
        cd ratio = evolve_free(e, t).rho(0, 3) / e.rho(0, 3);
        double rate = -std::arg(ratio) / t;
        worst_rel = std::max(worst_rel, std::abs(rate - w) / std::abs(w));
    }
    return {state_err < 1e-10 && fid_max < 1e-12 && worst_rel < 1e-9,
            "state error " + sci(state_err) + " (tol 1e-10), max |FID| " + sci(fid_max) +
                ", double-quantum rate relative error " + sci(worst_rel) + " (tol 1e-9)"};
}

Outcome gradient_echo() {
    ExperimentResult r = run_experiment("dqc_echo");
    EchoOptions defaults;
    auto m = [&](const char* k) { return r.metrics.count(k) ? r.metrics.at(k) : -1.0; };
    return {r.ok() && defaults.isochromats >= 256,
            std::to_string(defaults.isochromats) + " isochromats, residual " + sci(100 * m("residual_after_dephase")) +
                " % (limit 2 %), DQ echo at " + sci(m("dq_echo_time_s")) + " s (1/J = 1.67e-01), ratio " +
                sci(m("echo_time_ratio")) + ", " + (r.ok() ? "anti-phase doublet after pulse" : "assertion failed")};
}

Outcome polarization() {
    SpinSystem two = dibromothiophene();
    SpinSystem three = chloronitrobenzene().subsystem({1, 2, 3});
    DensityState p2 = execute(prep_pp2(two), equilibrium_state(two));
    DensityState p3 = execute(prep_pp3(three), equilibrium_state(three));
    bool ok = true;
    std::string detail;
    for (auto [n, st] : {std::pair{2, &p2}, {3, &p3}}) {
        double worst = 0.0;
        for (int k = 1; k <= n; ++k) {
            double r = polarization_ratio(*st, k);
            worst = std::max(worst, r);
            ok = ok && r <= polarization_bound(n) + 1e-12;
        }
        detail += "n=" + std::to_string(n) + ": " + sci(worst) + " <= " + sci(polarization_bound(n)) + "; ";
    }
    return {ok, detail + "per-spin population difference relative to equilibrium"};
}

Outcome pulse_language() {
    namespace fs = std::filesystem;
    std::string root = NMRQC_DATA_DIR;
    int ok_programs = 0, total = 0;
    for (const auto& e : fs::directory_iterator(root + "/programs")) {
        if (e.path().extension() != ".pp") continue;
        ++total;
        std::ifstream in(e.path());
        std::stringstream buf;
        buf << in.rdbuf();
        std::string name = e.path().filename().string();
        std::string mol = name == "toffoli.pp"   ? "chloronitrobenzene.json"
                          : name == "pp3_prep.pp" ? "chloronitrobenzene_h123.json"
                                                  : "dibromothiophene.json";
        try {
            dsl::PulseProgram p = dsl::parse_program(buf.str());
            dsl::compile_program(p, load_molecule(root + "/molecules/" + mol));
            if (dsl::parse_program(dsl::pretty_print(p)) == p) ++ok_programs;
        } catch (const std::exception&) {
        }
    }

    auto first = [](const std::function<void()>& f) -> std::optional<dsl::Diagnostic> {
        try {
            f();
        } catch (const dsl::DiagnosticError& e) {
            return e.diagnostics.front();
        }
        return std::nullopt;
    };
    SpinSystem chain = make_spin_system("chain", {-100, 0, 100}, {{1, 2, 7.0}, {2, 3, 5.0}});
    auto axis = first([] { dsl::parse_program("pulse q pi spin 1"); });
    auto zero = first([&] { dsl::compile_program(dsl::parse_program("grad\ncdelay 1/(2*J(1,3))"), chain); });
    auto range = first([&] { dsl::compile_program(dsl::parse_program("pulse x pi spin 1;  pulse y pi spin 4"), chain); });
    bool d1 = axis && axis->message == "unknown axis 'q'" && axis->span.line == 1 && axis->span.col == 7;
    bool d2 = zero && zero->message.find("division by zero coupling") != std::string::npos && zero->span.line == 2 &&
              zero->span.col == 1;
    bool d3 = range && range->message == "spin 4 is outside 1..3" && range->span.line == 1 && range->span.col == 21;
    return {ok_programs == total && total > 0 && d1 && d2 && d3,
            std::to_string(ok_programs) + "/" + std::to_string(total) +
                " bundled programs parse, compile and round-trip; diagnostics: unknown axis " + (d1 ? "1:7" : "wrong") +
                ", zero coupling " + (d2 ? "2:1" : "wrong") + ", spin range " + (d3 ? "1:21" : "wrong")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"propagator correctness", propagator_correctness},
        {"product-operator tables", tables},
        {"gate recipes vs reference matrices", gate_recipes},
        {"gate generators", generators},
        {"Toffoli truth table", toffoli},
        {"pseudo-pure preparation", pseudo_pure},
        {"spectral presets", spectral_figures},
        {"entanglement and double quantum", entanglement},
        {"gradient echo", gradient_echo},
        {"polarization scaling", polarization},
        {"pulse-program language", pulse_language},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
