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

#ifndef NMRQC_EXPERIMENTS_H_
#define NMRQC_EXPERIMENTS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmrqc/acquisition.h"

namespace nmrqc {

struct Assertion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentResult {
    std::string name;
    std::string description;
    std::vector<Assertion> assertions;
    std::map<std::string, double> metrics;
    std::map<std::string, Spectrum> spectra;  // keyed by panel name
    std::map<std::string, PeakList> peaks;
    std::map<std::string, PeakList> sticks;   // analytic expectation per panel
    std::map<std::string, POExpansion> states;
    std::optional<EchoResult> echo;

    bool ok() const;
};

// eq2_hard, eq2_pox1, one_bit, eq2_scx1, pp2_prep, pp2_super, dqc_echo, eq4_tof1.
const std::vector<std::string>& experiment_names();

// Throws std::invalid_argument for unknown names.
ExperimentResult run_experiment(const std::string& name);

// Dibromothiophene with the carrier moved so that nu_1 + nu_2 != 0.
SpinSystem shifted_dibromothiophene();

// The entangled two-spin state: [pi/2]_y^1 on |00> followed by XOR_SC^2.
DensityState entangled_state(const SpinSystem& s);

// Machine-checkable summary: assertions, metrics and picked peaks per panel.
std::string assertions_json(const ExperimentResult& r);

// Writes <out>/<name>_<panel>.csv, _peaks.json, _echo.csv and
// <name>_assertions.json. Returns the paths written.
std::vector<std::string> write_experiment(const ExperimentResult& r, const std::string& out_dir);

}  // namespace nmrqc

#endif  // NMRQC_EXPERIMENTS_H_
