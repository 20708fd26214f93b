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

// Pulse-program language.
//
//   program    := { statement (";" | newline) }
//   statement  := pulse | tpulse | delay | cdelay | zrot | grad | gate | acquire
//   pulse      := "pulse" axis angle target
//   tpulse     := "tpulse" axis angle ( "plus" INT | "minus" INT | "levels" BITS BITS )
//   delay      := "delay" duration [ "refocus" INT+ ]
//   cdelay     := "cdelay" duration
//   zrot       := "zrot" angle "spin" INT
//   grad       := "grad"
//   gate       := "gate" IDENT { key value }
//   acquire    := "acquire" INT duration
//   axis       := "x" | "y" | "-x" | "-y"
//   target     := "spin" INT { INT } | "all"
//   angle      := [-][INT] "pi" [ "/" INT ] | REAL "deg"
//   duration   := REAL [ "s" ] | "1/(" REAL "*J(" INT "," INT "))"
//
// '#' starts a comment that runs to the end of the line.

#ifndef NMRQC_DSL_H_
#define NMRQC_DSL_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nmrqc/acquisition.h"
#include "nmrqc/engine.h"

namespace nmrqc::dsl {

// Spans never take part in AST equality.
struct SourceSpan {
    int line = 1;
    int col = 1;
    int length = 0;
    // Spans do not take part in AST comparison.
    bool operator==(const SourceSpan&) const { return true; }
};

struct Diagnostic {
    std::string message;
    SourceSpan span;
    bool is_error = true;

    // "file:line:col: error: message"
    std::string format(const std::string& file) const;
};

struct DiagnosticError : std::runtime_error {
    explicit DiagnosticError(std::vector<Diagnostic> d);
    std::vector<Diagnostic> diagnostics;
};

// ---- lexer ----

enum class TokenKind { Ident, Number, Semicolon, Slash, LParen, RParen, Star, Comma, Minus, Newline, End };

struct Token {
    TokenKind kind;
    std::string lexeme;
    SourceSpan span;
};

// Throws DiagnosticError on characters outside the language.
std::vector<Token> lex(const std::string& text);

// ---- AST ----

struct Angle {
    bool degrees = false;
    long num = 0;  // radians = num * pi / den
    long den = 1;
    double deg = 0.0;

    double radians() const;
    bool operator==(const Angle&) const = default;
};

struct Duration {
    bool symbolic = false;
    double seconds = 0.0;
    double factor = 0.0;  // 1 / (factor * J(k, l))
    int k = 0;
    int l = 0;
    bool operator==(const Duration&) const = default;
};

struct PulseStmt {
    PulseAxis axis = PulseAxis::X;
    Angle angle;
    bool all = false;
    std::vector<int> spins;
    bool operator==(const PulseStmt&) const = default;
};

struct TPulseStmt {
    enum class Mode { Plus, Minus, Levels };
    PulseAxis axis = PulseAxis::Y;
    Angle angle;
    Mode mode = Mode::Plus;
    int spin = 0;
    std::string level_a, level_b;
    bool operator==(const TPulseStmt&) const = default;
};

struct DelayStmt {
    Duration duration;
    std::vector<int> refocus;
    bool operator==(const DelayStmt&) const = default;
};

struct CDelayStmt {
    Duration duration;
    bool operator==(const CDelayStmt&) const = default;
};

struct ZRotStmt {
    Angle angle;
    int spin = 0;
    bool operator==(const ZRotStmt&) const = default;
};

struct GradStmt {
    bool operator==(const GradStmt&) const = default;
};

// Keys: out INT, ctrl INT (repeatable), angle ANGLE, variant plus|minus,
// flip x|y.
struct GateArg {
    std::string key;
    int integer = 0;
    Angle angle;
    std::string word;
    SourceSpan span;
    bool operator==(const GateArg&) const = default;
};

struct GateStmt {
    std::string name;
    std::vector<GateArg> args;
    bool operator==(const GateStmt&) const = default;
};

struct AcquireStmt {
    int points = 0;
    Duration dwell;
    bool operator==(const AcquireStmt&) const = default;
};

using StatementBody = std::variant<PulseStmt, TPulseStmt, DelayStmt, CDelayStmt, ZRotStmt, GradStmt, GateStmt,
                                   AcquireStmt>;

struct Statement {
    StatementBody body;
    SourceSpan span;
    bool operator==(const Statement&) const = default;
};

struct PulseProgram {
    std::vector<Statement> statements;
    bool operator==(const PulseProgram&) const = default;
};

// Throws DiagnosticError; never returns a partial program.
PulseProgram parse_program(const std::string& text);

// Canonical text, one statement per line; parses back to an equal AST.
std::string pretty_print(const PulseProgram& p);

// Names accepted by "gate".
const std::vector<std::string>& gate_names();

// ---- compiler ----

struct AcquireSpec {
    int points = 0;
    double dwell_s = 0.0;
};

struct CompiledProgram {
    InstructionList instructions;  // averaged-coupling windows left unexpanded
    std::optional<AcquireSpec> acquire;
};

// Throws DiagnosticError for unknown spins, zero couplings in a duration,
// inapplicable gates and a misplaced acquire.
CompiledProgram compile_program(const PulseProgram& p, const SpinSystem& s);

struct InitialState {
    enum class Kind { Equilibrium, PseudoPure, Explicit } kind = Kind::Equilibrium;
    std::string bits;
    POExpansion po;

    static InitialState equilibrium() { return {}; }
    static InitialState pseudo_pure(std::string bits);
    static InitialState explicit_po(POExpansion po);
};

DensityState initial_density(const InitialState& init, const SpinSystem& s);

struct RunResult {
    DensityState final_state;
    std::optional<Fid> fid;
    std::optional<Spectrum> spectrum;
};

// Acquisition (when the program ends in acquire) uses `acq` for apodization
// and zero filling; points and dwell come from the statement.
RunResult run_program(const PulseProgram& p, const SpinSystem& s, const InitialState& init,
                      const AcquisitionParams& acq = {});

// Inverse of a gradient-free instruction list: reversed order, negated
// angles, and delays undone with inversion composites. Delay inversion
// needs a bipartite coupling network; throws InapplicableError otherwise.
InstructionList inverse(const InstructionList& ins, const SpinSystem& s);

}  // namespace nmrqc::dsl

#endif  // NMRQC_DSL_H_
