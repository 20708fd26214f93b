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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "nmrqc/dsl.h"

namespace nmrqc::dsl {

double Angle::radians() const {
    if (degrees) return deg * std::numbers::pi / 180.0;
    return double(num) * std::numbers::pi / double(den);
}

const std::vector<std::string>& gate_names() {
    static const std::vector<std::string> names = {"XOR_PO", "CROT",   "SQRT_XOR_PO", "XOR_QC",  "SQRT_XOR_QC",
                                                   "XOR_SC", "TOF_SC", "PP2_PREP",    "PP3_PREP"};
    return names;
}

namespace {

struct ParseFailure {
    Diagnostic diag;
};

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    PulseProgram run() {
        PulseProgram prog;
        std::vector<Diagnostic> errors;
        while (true) {
            while (is(TokenKind::Newline) || is(TokenKind::Semicolon)) ++pos_;
            if (is(TokenKind::End)) break;
            try {
                prog.statements.push_back(statement());
                if (!is(TokenKind::Semicolon) && !is(TokenKind::Newline) && !is(TokenKind::End)) {
                    fail(peek(), "expected ';' or newline before '" + peek().lexeme + "'");
                }
            } catch (const ParseFailure& f) {
                errors.push_back(f.diag);
                while (!is(TokenKind::Semicolon) && !is(TokenKind::Newline) && !is(TokenKind::End)) ++pos_;
            }
        }
        if (!errors.empty()) throw DiagnosticError(errors);
        return prog;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token& peek(size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool is(TokenKind k) const { return peek().kind == k; }
    bool is_word(const std::string& w) const { return is(TokenKind::Ident) && peek().lexeme == w; }
    const Token& take() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    [[noreturn]] static void fail(const Token& at, const std::string& msg) {
        SourceSpan sp = at.span;
        throw ParseFailure{{msg, sp, true}};
    }

    static std::string describe_token(const Token& t) {
        switch (t.kind) {
            case TokenKind::Newline: return "end of line";
            case TokenKind::End: return "end of input";
            default: return "'" + t.lexeme + "'";
        }
    }

    void expect(TokenKind k, const std::string& what) {
        if (!is(k)) fail(peek(), "expected " + what + ", found " + describe_token(peek()));
        take();
    }

    void expect_word(const std::string& w) {
        if (!is_word(w)) fail(peek(), "expected '" + w + "', found " + describe_token(peek()));
        take();
    }

    int integer(const std::string& what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Number || t.lexeme.find_first_not_of("0123456789") != std::string::npos) {
            fail(t, "expected " + what + ", found " + describe_token(t));
        }
        int v = 0;
        auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        if (ec != std::errc()) fail(t, what + " out of range");
        take();
        return v;
    }

    double real(const std::string& what) {
        const Token& t = peek();
        if (t.kind != TokenKind::Number) fail(t, "expected " + what + ", found " + describe_token(t));
        double v = 0.0;
        auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
        if (ec != std::errc()) fail(t, "bad number '" + t.lexeme + "'");
        take();
        return v;
    }

    PulseAxis axis() {
        const Token& start = peek();
        bool neg = false;
        if (is(TokenKind::Minus)) {
            neg = true;
            take();
        }
        const Token& t = peek();
        if (t.kind == TokenKind::Ident && (t.lexeme == "x" || t.lexeme == "y")) {
            take();
            if (t.lexeme == "x") return neg ? PulseAxis::MinusX : PulseAxis::X;
            return neg ? PulseAxis::MinusY : PulseAxis::Y;
        }
        if (t.kind == TokenKind::Ident || t.kind == TokenKind::Number) {
            fail(neg ? start : t, "unknown axis '" + std::string(neg ? "-" : "") + t.lexeme + "'");
        }
        fail(t, "expected axis (x, y, -x, -y), found " + describe_token(t));
    }

    Angle angle() {
        const Token& start = peek();
        bool neg = false;
        if (is(TokenKind::Minus)) {
            neg = true;
            take();
        }
        Angle a;
        if (is(TokenKind::Number)) {
            const Token& num = peek();
            if (peek(1).kind == TokenKind::Ident && peek(1).lexeme == "deg") {
                double v = real("angle");
                take();
                a.degrees = true;
                a.deg = neg ? -v : v;
                return a;
            }
            if (!(peek(1).kind == TokenKind::Ident && peek(1).lexeme == "pi")) {
                fail(peek(1), "expected 'pi' or 'deg' after " + describe_token(num));
            }
            a.num = integer("integer multiple of pi");
        } else if (is_word("pi")) {
            a.num = 1;
        } else {
            fail(start, "expected angle, found " + describe_token(start));
        }
        expect_word("pi");
        if (is(TokenKind::Slash)) {
            take();
            const Token& d = peek();
            a.den = integer("denominator");
            if (a.den == 0) fail(d, "zero denominator in angle");
        }
        if (neg) a.num = -a.num;
        long g = std::gcd(std::abs(a.num), a.den);
        if (g > 1) {
            a.num /= g;
            a.den /= g;
        }
        if (a.num == 0) a.den = 1;
        return a;
    }

    Duration duration() {
        Duration d;
        const Token& t = peek();
        if (is(TokenKind::Minus)) fail(t, "durations cannot be negative");
        if (is(TokenKind::Number) && peek(1).kind == TokenKind::Slash) {
            if (t.lexeme != "1") fail(t, "symbolic durations have the form 1/(a*J(k,l))");
            take();
            take();
            expect(TokenKind::LParen, "'('");
            d.symbolic = true;
            d.factor = real("coupling factor");
            expect(TokenKind::Star, "'*'");
            expect_word("J");
            expect(TokenKind::LParen, "'('");
            d.k = integer("spin index");
            expect(TokenKind::Comma, "','");
            d.l = integer("spin index");
            expect(TokenKind::RParen, "')'");
            expect(TokenKind::RParen, "')'");
            return d;
        }
        d.seconds = real("duration");
        if (is_word("s")) take();
        return d;
    }

    Statement statement() {
        const Token& head = peek();
        if (head.kind != TokenKind::Ident) fail(head, "expected a statement, found " + describe_token(head));
        take();
        Statement st;
        const std::string& w = head.lexeme;
        if (w == "pulse") {
            PulseStmt p;
            p.axis = axis();
            p.angle = angle();
            if (is_word("all")) {
                take();
                p.all = true;
            } else {
                expect_word("spin");
                p.spins.push_back(integer("spin index"));
                while (is(TokenKind::Number)) p.spins.push_back(integer("spin index"));
            }
            st.body = p;
        } else if (w == "tpulse") {
            TPulseStmt p;
            p.axis = axis();
            p.angle = angle();
            if (is_word("plus") || is_word("minus")) {
                p.mode = peek().lexeme == "plus" ? TPulseStmt::Mode::Plus : TPulseStmt::Mode::Minus;
                take();
                p.spin = integer("spin index");
            } else if (is_word("levels")) {
                take();
                for (std::string* dst : {&p.level_a, &p.level_b}) {
                    const Token& b = peek();
                    if (b.kind != TokenKind::Number || b.lexeme.find_first_not_of("01") != std::string::npos) {
                        fail(b, "expected a basis label of 0/1 digits, found " + describe_token(b));
                    }
                    *dst = b.lexeme;
                    take();
                }
                p.mode = TPulseStmt::Mode::Levels;
            } else {
                fail(peek(), "expected 'plus', 'minus' or 'levels', found " + describe_token(peek()));
            }
            st.body = p;
        } else if (w == "delay") {
            DelayStmt d;
            d.duration = duration();
            if (is_word("refocus")) {
                take();
                d.refocus.push_back(integer("spin index"));
                while (is(TokenKind::Number)) d.refocus.push_back(integer("spin index"));
            }
            st.body = d;
        } else if (w == "cdelay") {
            st.body = CDelayStmt{duration()};
        } else if (w == "zrot") {
            ZRotStmt z;
            z.angle = angle();
            expect_word("spin");
            z.spin = integer("spin index");
            st.body = z;
        } else if (w == "grad") {
            st.body = GradStmt{};
        } else if (w == "gate") {
            GateStmt g;
            const Token& name = peek();
            if (name.kind != TokenKind::Ident) fail(name, "expected gate name, found " + describe_token(name));
            const auto& names = gate_names();
            if (std::find(names.begin(), names.end(), name.lexeme) == names.end()) {
                fail(name, "unknown gate '" + name.lexeme + "'");
            }
            g.name = name.lexeme;
            take();
            while (is(TokenKind::Ident)) {
                const Token& key = take();
                GateArg a;
                a.key = key.lexeme;
                a.span = key.span;
                if (a.key == "out" || a.key == "ctrl") {
                    a.integer = integer("spin index");
                } else if (a.key == "angle") {
                    a.angle = angle();
                } else if (a.key == "variant" || a.key == "flip") {
                    const Token& v = peek();
                    bool ok = v.kind == TokenKind::Ident &&
                              (a.key == "variant" ? (v.lexeme == "plus" || v.lexeme == "minus")
                                                  : (v.lexeme == "x" || v.lexeme == "y"));
                    if (!ok) {
                        fail(v, "bad value " + describe_token(v) + " for '" + a.key + "'");
                    }
                    a.word = v.lexeme;
                    take();
                } else {
                    fail(key, "unknown gate argument '" + a.key + "'");
                }
                g.args.push_back(a);
            }
            st.body = g;
        } else if (w == "acquire") {
            AcquireStmt a;
            a.points = integer("point count");
            a.dwell = duration();
            st.body = a;
        } else {
            fail(head, "unknown statement '" + w + "'");
        }
        const Token& last = toks_[pos_ - 1];
        st.span = head.span;
        st.span.length = last.span.line == head.span.line ? last.span.col + last.span.length - head.span.col
                                                          : head.span.length;
        return st;
    }
};

std::string num(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

const char* axis_text(PulseAxis a) {
    switch (a) {
        case PulseAxis::X: return "x";
        case PulseAxis::Y: return "y";
        case PulseAxis::MinusX: return "-x";
        case PulseAxis::MinusY: return "-y";
    }
    return "?";
}

std::string angle_text(const Angle& a) {
    if (a.degrees) return num(a.deg) + "deg";
    std::string out = a.num < 0 ? "-" : "";
    long m = std::abs(a.num);
    if (m != 1) out += std::to_string(m);
    out += "pi";
    if (a.den != 1) out += "/" + std::to_string(a.den);
    return out;
}

std::string duration_text(const Duration& d) {
    if (d.symbolic) return "1/(" + num(d.factor) + "*J(" + std::to_string(d.k) + "," + std::to_string(d.l) + "))";
    return num(d.seconds) + "s";
}

std::string spins_text(const std::vector<int>& v) {
    std::string out;
    for (int k : v) out += " " + std::to_string(k);
    return out;
}

}  // namespace

PulseProgram parse_program(const std::string& text) { return Parser(lex(text)).run(); }

std::string pretty_print(const PulseProgram& p) {
    std::ostringstream os;
    for (const Statement& st : p.statements) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, PulseStmt>) {
                    os << "pulse " << axis_text(x.axis) << ' ' << angle_text(x.angle)
                       << (x.all ? std::string(" all") : " spin" + spins_text(x.spins));
                } else if constexpr (std::is_same_v<T, TPulseStmt>) {
                    os << "tpulse " << axis_text(x.axis) << ' ' << angle_text(x.angle);
                    if (x.mode == TPulseStmt::Mode::Levels) {
                        os << " levels " << x.level_a << ' ' << x.level_b;
                    } else {
                        os << (x.mode == TPulseStmt::Mode::Plus ? " plus " : " minus ") << x.spin;
                    }
                } else if constexpr (std::is_same_v<T, DelayStmt>) {
                    os << "delay " << duration_text(x.duration);
                    if (!x.refocus.empty()) os << " refocus" << spins_text(x.refocus);
                } else if constexpr (std::is_same_v<T, CDelayStmt>) {
                    os << "cdelay " << duration_text(x.duration);
                } else if constexpr (std::is_same_v<T, ZRotStmt>) {
                    os << "zrot " << angle_text(x.angle) << " spin " << x.spin;
                } else if constexpr (std::is_same_v<T, GradStmt>) {
                    os << "grad";
                } else if constexpr (std::is_same_v<T, GateStmt>) {
                    os << "gate " << x.name;
                    for (const GateArg& a : x.args) {
                        os << ' ' << a.key << ' ';
                        if (a.key == "out" || a.key == "ctrl") {
                            os << a.integer;
                        } else if (a.key == "angle") {
                            os << angle_text(a.angle);
                        } else {
                            os << a.word;
                        }
                    }
                } else if constexpr (std::is_same_v<T, AcquireStmt>) {
                    os << "acquire " << x.points << ' ' << duration_text(x.dwell);
                }
            },
            st.body);
        os << '\n';
    }
    return os.str();
}

}  // namespace nmrqc::dsl
