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

#ifndef NMRQC_SPIN_SYSTEM_H_
#define NMRQC_SPIN_SYSTEM_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmrqc/spin_algebra.h"

namespace nmrqc {

struct ValidationError : std::runtime_error {
    ValidationError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path(path) {}
    std::string path;
};

// Weakly coupled spin-1/2 system. Offsets and couplings are in Hz; the only
// conversion to rad/s happens in hamiltonian().
struct SpinSystem {
    std::string name;
    std::vector<double> offsets_hz;
    Eigen::MatrixXd couplings_hz;  // symmetric, zero diagonal
    std::vector<double> t2_s;      // empty, or one entry per spin
    std::vector<std::string> labels;

    int n() const { return int(offsets_hz.size()); }
    double j(int k, int l) const { return couplings_hz(k - 1, l - 1); }
    void set_j(int k, int l, double hz);

    // Throws ValidationError on structural problems.
    void validate() const;

    // Pairs with |J| / |dnu| > 0.1, as human-readable warnings.
    std::vector<std::string> weak_coupling_warnings() const;

    // Spins (1-based) in the given order; couplings and offsets carried over.
    SpinSystem subsystem(const std::vector<int>& spins) const;
};

SpinSystem make_spin_system(std::string name, std::vector<double> offsets_hz,
                            const std::vector<std::tuple<int, int, double>>& couplings = {});

// Diagonal of H = sum 2 pi nu_k I_z^k + sum_{k<l} 2 pi J_kl I_z^k I_z^l (rad/s).
Eigen::VectorXd hamiltonian_diagonal(const SpinSystem& s);
Matrix hamiltonian(const SpinSystem& s);

// Diagonal of the coupling part only.
Eigen::VectorXd coupling_hamiltonian_diagonal(const SpinSystem& s);
Eigen::VectorXd coupling_hamiltonian_diagonal(int n, const Eigen::MatrixXd& couplings_hz);

// sum_k I_z^k, the shifted and scaled high-temperature equilibrium.
Matrix equilibrium_matrix(int n);

// Molecule files are JSON objects:
//   {"name": str, "offsets_hz": [..], "couplings_hz": [[k, l, J], ..],
//    "t2_s": [..], "labels": [..]}
// with couplings 1-indexed. Unknown keys are rejected.
SpinSystem parse_molecule(const std::string& text);
SpinSystem load_molecule(const std::string& path);
std::string molecule_to_json(const SpinSystem& s);

// Bundled presets. Offsets are rotating-frame precession offsets; the
// spectrum axis shows a spin with offset nu at -nu (see acquisition.h).
SpinSystem dibromothiophene();
SpinSystem chloronitrobenzene();

}  // namespace nmrqc

#endif  // NMRQC_SPIN_SYSTEM_H_
