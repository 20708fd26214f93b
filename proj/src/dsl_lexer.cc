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

#include <cctype>

#include "nmrqc/dsl.h"

namespace nmrqc::dsl {

std::string Diagnostic::format(const std::string& file) const {
    return file + ":" + std::to_string(span.line) + ":" + std::to_string(span.col) + ": " +
           (is_error ? "error: " : "warning: ") + message;
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& d) {
    std::string out;
    for (const Diagnostic& x : d) {
        if (!out.empty()) out += "\n";
        out += x.format("<input>");
    }
    return out;
}

}  // namespace

DiagnosticError::DiagnosticError(std::vector<Diagnostic> d)
    : std::runtime_error(join_messages(d)), diagnostics(std::move(d)) {}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::vector<Diagnostic> errors;
    int line = 1, col = 1;
    size_t i = 0;
    auto at = [&](size_t j) { return j < text.size() ? text[j] : '\0'; };
    auto push = [&](TokenKind k, size_t len) {
        out.push_back({k, text.substr(i, len), {line, col, int(len)}});
        i += len;
        col += int(len);
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            push(TokenKind::Newline, 1);
            ++line;
            col = 1;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            ++col;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
                ++col;
            }
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (std::isalnum(static_cast<unsigned char>(at(j))) || at(j) == '_') ++j;
            push(TokenKind::Ident, j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(static_cast<unsigned char>(at(i + 1))))) {
            size_t j = i;
            while (std::isdigit(static_cast<unsigned char>(at(j)))) ++j;
            if (at(j) == '.') {
                ++j;
                while (std::isdigit(static_cast<unsigned char>(at(j)))) ++j;
            }
            // Exponent only when digits follow, so "2e" stays NUMBER IDENT.
            if (at(j) == 'e' || at(j) == 'E') {
                size_t e = j + 1;
                if (at(e) == '+' || at(e) == '-') ++e;
                if (std::isdigit(static_cast<unsigned char>(at(e)))) {
                    j = e;
                    while (std::isdigit(static_cast<unsigned char>(at(j)))) ++j;
                }
            }
            push(TokenKind::Number, j - i);
        } else {
            TokenKind k;
            switch (c) {
                case ';': k = TokenKind::Semicolon; break;
                case '/': k = TokenKind::Slash; break;
                case '(': k = TokenKind::LParen; break;
                case ')': k = TokenKind::RParen; break;
                case '*': k = TokenKind::Star; break;
                case ',': k = TokenKind::Comma; break;
                case '-': k = TokenKind::Minus; break;
                default:
                    errors.push_back({std::string("unexpected character '") + c + "'", {line, col, 1}});
                    ++i;
                    ++col;
                    continue;
            }
            push(k, 1);
        }
    }
    out.push_back({TokenKind::End, "", {line, col, 0}});
    if (!errors.empty()) throw DiagnosticError(errors);
    return out;
}

}  // namespace nmrqc::dsl
