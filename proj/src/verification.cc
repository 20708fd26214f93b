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

#include "nmrqc/verification.h"

#include <cmath>

namespace nmrqc {

namespace {

// Rows: spin-1 factor 1, x, y, z. Columns: spin-2 factor 1, x, y, z.
ConjugationTable make_table(const char* const (&cells)[16]) {
    const char f[] = {'1', 'x', 'y', 'z'};
    ConjugationTable t;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            std::string cell = cells[4 * r + c];
            double sign = 1.0;
            if (cell[0] == '-') {
                sign = -1.0;
                cell = cell.substr(1);
            }
            t[std::string{f[r], f[c]}] = {cell, sign};
        }
    }
    return t;
}

double identity_coefficient(const POExpansion& p) { return p.coefficient(identity_label(p.n())); }

}  // namespace

const ConjugationTable& po_xor_table() {
    static const ConjugationTable t = make_table({
        "11", "-yy", "yx", "1z",
        "xz", "-zx", "-zy", "x1",
        "y1", "-1y", "1x", "yz",
        "zz", "xx", "xy", "z1",
    });
    return t;
}

const ConjugationTable& qc_xor_table() {
    static const ConjugationTable t = make_table({
        "11", "xx", "xy", "1z",
        "x1", "1x", "1y", "xz",
        "yz", "zy", "-zx", "y1",
        "zz", "-yy", "yx", "z1",
    });
    return t;
}

const ConjugationTable& sc_xor_table() {
    static const ConjugationTable t = make_table({
        "11", "-yy", "yx", "1z",
        "y1", "-1y", "1x", "yz",
        "-xz", "zx", "zy", "-x1",
        "zz", "xx", "xy", "z1",
    });
    return t;
}

std::string signed_label(const std::string& label, double sign) { return (sign < 0 ? "-" : "") + label; }

std::vector<TableCheck> check_conjugation_table(const Matrix& p, const ConjugationTable& t, double tol) {
    std::vector<TableCheck> out;
    for (const auto& [in, image] : t) {
        TableCheck c;
        c.input = in;
        c.expected = signed_label(image.first, image.second);
        c.got = po_decompose(conjugate(p, basis_element(in)), 2).pruned(1e-12);
        POExpansion want(2);
        want.set(image.first, image.second);
        c.error = c.got.max_abs_difference(want);
        c.pass = c.error <= tol;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<GeneratorCheck> check_generators(double tol) {
    struct Case {
        std::string name;
        Matrix u;
        POExpansion expected;
    };
    std::vector<Case> cases = {
        {"XOR_PO", reference::xor_po(), POExpansion(2, {{"y1", 0.5}, {"yz", -0.5}})},
        {"XOR_QC", reference::xor_qc(), POExpansion(2, {{"11", 0.25}, {"1z", -0.5}, {"x1", -0.5}, {"xz", 0.5}})},
        {"XOR_QC * XOR_SC", reference::xor_qc() * reference::xor_sc(),
         POExpansion(2, {{"11", 0.5}, {"z1", 0.5}, {"1z", -0.5}})},
        {"TOF_QC * TOF_SC", reference::toffoli_qc() * reference::toffoli_sc(),
         POExpansion(3, {{"111", 0.125},
                         {"z11", -1.0},
                         {"1z1", -0.25},
                         {"11z", -0.25},
                         {"zz1", -0.25},
                         {"z1z", -0.25},
                         {"1zz", 0.25}})},
    };
    std::vector<GeneratorCheck> out;
    for (const Case& c : cases) {
        GeneratorCheck g;
        g.name = c.name;
        g.expected = c.expected;
        g.got = generator_log(c.u).theta.pruned(1e-12);
        g.identity_offset = identity_coefficient(g.got) - identity_coefficient(c.expected);
        POExpansion a = g.got, b = c.expected;
        a.set(identity_label(a.n()), 0.0);
        b.set(identity_label(b.n()), 0.0);
        g.error = a.max_abs_difference(b);
        g.pass = g.error < tol;
        out.push_back(std::move(g));
    }
    return out;
}

bool VerificationReport::ok() const {
    for (const GateCheck& g : gates)
        if (!g.pass) return false;
    for (const auto& [name, rows] : tables)
        for (const TableCheck& c : rows)
            if (!c.pass) return false;
    for (const GeneratorCheck& g : generators)
        if (!g.pass) return false;
    return true;
}

VerificationReport verify_all(const SpinSystem& two, const SpinSystem& three) {
    VerificationReport r;
    r.gates = verify_gate_library(two, three);
    auto prop = [&](const GateSpec& g) { return sequence_propagator(g.recipe, two).u; };
    r.tables["po_xor"] = check_conjugation_table(prop(gate_xor_po(two, 1)), po_xor_table());
    r.tables["qc_xor"] = check_conjugation_table(prop(gate_xor_qc(two, 1)), qc_xor_table());
    r.tables["sc_xor"] = check_conjugation_table(prop(gate_xor_sc(two, 1)), sc_xor_table());
    r.generators = check_generators();
    return r;
}

}  // namespace nmrqc
