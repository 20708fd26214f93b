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

#ifndef NMRQC_VERIFICATION_H_
#define NMRQC_VERIFICATION_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nmrqc/gates.h"

namespace nmrqc {

// Expected image of each two-spin basis operator under a gate, written as
// label -> (label, sign). "11" is the identity.
using ConjugationTable = std::map<std::string, std::pair<std::string, double>>;

const ConjugationTable& po_xor_table();  // [pi]_y^{+1}
const ConjugationTable& qc_xor_table();  // [-pi]_x^{+1} with [-pi/2]_z^2
const ConjugationTable& sc_xor_table();  // [pi/2]_y^1 - 1/(2J) - [pi/2]_x^1

struct TableCheck {
    std::string input;
    std::string expected;  // signed, e.g. "-yy"
    POExpansion got;
    double error = 0.0;
    bool pass = false;
};

// Conjugates every basis operator by the propagator p (rho -> p rho p^dag).
std::vector<TableCheck> check_conjugation_table(const Matrix& p, const ConjugationTable& t, double tol = 1e-10);

struct GeneratorCheck {
    std::string name;
    POExpansion expected;
    POExpansion got;
    double error = 0.0;            // largest non-identity coefficient error
    double identity_offset = 0.0;  // got - expected on the identity; a global phase
    bool pass = false;
};

// Matrix logarithms of the reference XOR_PO, XOR_QC, XOR_QC XOR_SC and
// Toffoli QC SC products against their known generators.
std::vector<GeneratorCheck> check_generators(double tol = 1e-9);

struct VerificationReport {
    std::vector<GateCheck> gates;
    std::map<std::string, std::vector<TableCheck>> tables;
    std::vector<GeneratorCheck> generators;

    bool ok() const;
};

VerificationReport verify_all(const SpinSystem& two_spin, const SpinSystem& three_spin);

std::string signed_label(const std::string& label, double sign);

}  // namespace nmrqc

#endif  // NMRQC_VERIFICATION_H_
