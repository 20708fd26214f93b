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

// nmrqc command-line front end.
//
// Exit codes: 0 success, 1 diagnostics or failed checks, 2 I/O errors.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nmrqc/dsl.h"
#include "nmrqc/experiments.h"
#include "nmrqc/pseudo_pure.h"
#include "nmrqc/verification.h"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace nmrqc;

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kIoError = 2;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
    if (!os) throw IoError("cannot write '" + path.string() + "'");
}

SpinSystem load(const std::string& path) {
    SpinSystem s = parse_molecule(read_file(path));
    for (const std::string& w : s.weak_coupling_warnings()) std::cerr << path << ": warning: " << w << "\n";
    return s;
}

std::string state_json(const DensityState& rho) {
    POExpansion po = rho.po().pruned(1e-12);
    json doc;
    doc["spins"] = po.n();
    doc["terms"] = json::object();
    for (const auto& [label, c] : po.terms()) doc["terms"][label] = c;
    doc["text"] = po.to_string();
    return doc.dump(2) + "\n";
}

std::string fmt_phase(cd z) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << std::showpos << z.real() << z.imag() << "i";
    return os.str();
}

struct RunOptions {
    std::string molecule, program, init = "eq", out = ".";
    int points = 0;
    double dwell = 0.0;
    bool no_apodize = false;
};

int cmd_run(const RunOptions& o) {
    SpinSystem s = load(o.molecule);
    dsl::InitialState init;
    if (o.init.rfind("pp:", 0) == 0) {
        std::string bits = o.init.substr(3);
        if (!valid_bits(bits) || int(bits.size()) != s.n()) {
            std::cerr << "error: --init " << o.init << " needs " << s.n() << " bits\n";
            return kDiagnostics;
        }
        init = dsl::InitialState::pseudo_pure(bits);
    } else if (o.init != "eq") {
        std::cerr << "error: --init must be eq or pp:BITS\n";
        return kDiagnostics;
    }

    std::string text = read_file(o.program);
    dsl::PulseProgram prog;
    dsl::CompiledProgram compiled;
    try {
        prog = dsl::parse_program(text);
        compiled = dsl::compile_program(prog, s);
    } catch (const dsl::DiagnosticError& e) {
        for (const dsl::Diagnostic& d : e.diagnostics) std::cerr << d.format(o.program) << "\n";
        return kDiagnostics;
    }

    AcquisitionParams acq;
    acq.apodize = !o.no_apodize;
    DensityState final_state = execute(compiled.instructions, dsl::initial_density(init, s));
    acq.points = o.points > 0 ? o.points : compiled.acquire ? compiled.acquire->points : acq.points;
    acq.dwell_s = o.dwell > 0 ? o.dwell : compiled.acquire ? compiled.acquire->dwell_s : acq.dwell_s;
    if (!acq.apodize) acq.line_broadening_hz = 0.0;
    Spectrum spec = acquire(final_state, acq);
    PeakList peaks = pick_peaks(spec);

    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "final_state.json", state_json(final_state));
    write_file(fs::path(o.out) / "spectrum.csv", spectrum_csv(spec));
    write_file(fs::path(o.out) / "peaks.json", peaks_json(peaks));
    std::cout << "final state: " << final_state.po().to_string() << "\n";
    std::cout << peaks.size() << " peaks:";
    for (const Peak& p : peaks) std::cout << " " << std::setprecision(6) << p.frequency_hz << " Hz (" << p.amplitude << ")";
    std::cout << "\nwrote " << o.out << "\n";
    return kOk;
}

int cmd_validate(const std::string& path) {
    SpinSystem s = load(path);
    std::cout << s.name << ": " << s.n() << " spins\n";
    for (int k = 1; k <= s.n(); ++k) {
        std::cout << "  spin " << k;
        if (!s.labels.empty()) std::cout << " (" << s.labels[k - 1] << ")";
        std::cout << "  offset " << s.offsets_hz[k - 1] << " Hz\n";
    }
    for (int k = 1; k <= s.n(); ++k)
        for (int l = k + 1; l <= s.n(); ++l)
            if (s.j(k, l) != 0.0) std::cout << "  J(" << k << "," << l << ") = " << s.j(k, l) << " Hz\n";
    return kOk;
}

int cmd_verify_gates() {
    SpinSystem two = dibromothiophene();
    SpinSystem ideal3 = make_spin_system("ideal three-spin", {-150, 0, 150}, {{1, 2, 5.0}, {1, 3, 5.0}});
    VerificationReport r = verify_all(two, ideal3);

    std::cout << "recipe vs reference (up to global phase)\n";
    for (const GateCheck& g : r.gates) {
        std::cout << "  " << (g.pass ? "PASS " : "FAIL ") << std::left << std::setw(36) << g.name << std::right
                  << " residual " << std::scientific << std::setprecision(2) << g.residual << std::defaultfloat
                  << "  phase " << fmt_phase(g.phase) << "\n";
    }
    for (const auto& [name, rows] : r.tables) {
        int pass = 0;
        for (const TableCheck& c : rows) pass += c.pass;
        std::cout << "conjugation table " << name << ": " << pass << "/" << rows.size() << "\n";
        for (int i = 0; i < 4; ++i) {
            std::cout << "  ";
            for (int j = 0; j < 4; ++j) {
                const TableCheck& c = rows[4 * i + j];
                std::cout << std::left << std::setw(5) << c.input << "-> " << std::setw(5) << c.expected
                          << (c.pass ? "  " : "! ");
            }
            std::cout << std::right << "\n";
        }
    }
    std::cout << "generators (U = exp(i pi Theta))\n";
    for (const GeneratorCheck& g : r.generators) {
        std::cout << "  " << (g.pass ? "PASS " : "FAIL ") << g.name << ": " << g.got.to_string() << "\n";
        if (std::abs(g.identity_offset) > 1e-9) {
            std::cout << "       identity term differs by " << g.identity_offset << " (global phase only)\n";
        }
    }

    // The Toffoli recipe on a real molecule needs coupling averaging; only
    // its action on populations is exact there.
    SpinSystem cnb = chloronitrobenzene().subsystem({1, 2, 3});
    Matrix p = sequence_propagator(expand_instructions(gate_toffoli_sc(cnb, 1, 2, 3).recipe, cnb), cnb).u;
    bool truth = true;
    for (unsigned b = 0; b < 8; ++b) {
        unsigned want = (b & 3u) == 3u ? b ^ 4u : b;
        Matrix in = Matrix::Zero(8, 8);
        in(b, b) = 1.0;
        truth = truth && std::abs(conjugate(p, in)(want, want) - 1.0) < 1e-8;
    }
    std::cout << (truth ? "PASS" : "FAIL") << " TOF_SC truth table on " << cnb.name << " (spins 1-3)\n";

    bool ok = r.ok() && truth;
    std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
    return ok ? kOk : kDiagnostics;
}

int cmd_experiment(const std::string& name, const std::string& out) {
    std::vector<std::string> names;
    if (name == "all") {
        names = experiment_names();
    } else {
        names = {name};
    }
    bool ok = true;
    for (const std::string& n : names) {
        ExperimentResult r;
        try {
            r = run_experiment(n);
        } catch (const std::invalid_argument&) {
            std::cerr << "error: unknown experiment '" << n << "'; available:";
            for (const std::string& x : experiment_names()) std::cerr << " " << x;
            std::cerr << "\n";
            return kDiagnostics;
        }
        try {
            write_experiment(r, out);
        } catch (const std::ios_base::failure& e) {
            throw IoError(e.what());
        }
        std::cout << "== " << r.name << ": " << r.description << "\n";
        for (const Assertion& a : r.assertions) {
            std::cout << "  " << (a.pass ? "PASS " : "FAIL ") << a.name;
            if (!a.detail.empty()) std::cout << "  [" << a.detail << "]";
            std::cout << "\n";
        }
        for (const auto& [k, v] : r.metrics) std::cout << "  " << k << " = " << v << "\n";
        ok = ok && r.ok();
    }
    return ok ? kOk : kDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NMR quantum-logic simulator"};
    app.require_subcommand(1);

    RunOptions run;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a pulse program on a molecule");
    run_cmd->add_option("--molecule", run.molecule, "Molecule file (JSON)")->required();
    run_cmd->add_option("--program", run.program, "Pulse program (.pp)")->required();
    run_cmd->add_option("--init", run.init, "Initial state: eq or pp:BITS")->capture_default_str();
    run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
    run_cmd->add_option("--points", run.points, "FID points (overrides acquire)");
    run_cmd->add_option("--dwell", run.dwell, "Dwell time in seconds (overrides acquire)");
    run_cmd->add_flag("--no-apodize", run.no_apodize, "Skip exponential line broadening");

    std::string molecule;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a molecule file");
    validate_cmd->add_option("--molecule", molecule, "Molecule file (JSON)")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify-gates", "Check the gate library against its references");

    std::string preset, exp_out = "experiments";
    CLI::App* exp_cmd = app.add_subcommand("experiment", "Run a named experiment preset, or 'all'");
    exp_cmd->add_option("name", preset, "Preset name")->required();
    exp_cmd->add_option("--out", exp_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kDiagnostics;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*validate_cmd) return cmd_validate(molecule);
        if (*verify_cmd) return cmd_verify_gates();
        if (*exp_cmd) return cmd_experiment(preset, exp_out);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDiagnostics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDiagnostics;
    }
    return kOk;
}
