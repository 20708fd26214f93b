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

#include "nmrqc/spin_system.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace nmrqc {

using json = nlohmann::json;

void SpinSystem::set_j(int k, int l, double hz) {
    couplings_hz(k - 1, l - 1) = hz;
    couplings_hz(l - 1, k - 1) = hz;
}

void SpinSystem::validate() const {
    int count = n();
    if (count < 1 || count > kMaxSpins) {
        throw ValidationError("offsets_hz", "need 1.." + std::to_string(kMaxSpins) + " spins, got " +
                                                std::to_string(count));
    }
    for (int k = 0; k < count; ++k) {
        if (!std::isfinite(offsets_hz[k])) {
            throw ValidationError("offsets_hz[" + std::to_string(k) + "]", "not a finite number");
        }
    }
    if (couplings_hz.rows() != count || couplings_hz.cols() != count) {
        throw ValidationError("couplings_hz", "matrix shape does not match spin count");
    }
    for (int k = 0; k < count; ++k) {
        if (couplings_hz(k, k) != 0.0) {
            throw ValidationError("couplings_hz", "self-coupling on spin " + std::to_string(k + 1));
        }
        for (int l = k + 1; l < count; ++l) {
            if (couplings_hz(k, l) != couplings_hz(l, k)) {
                throw ValidationError("couplings_hz", "asymmetric J(" + std::to_string(k + 1) + "," +
                                                          std::to_string(l + 1) + ")");
            }
        }
    }
    if (!t2_s.empty() && int(t2_s.size()) != count) {
        throw ValidationError("t2_s", "expected " + std::to_string(count) + " entries");
    }
    for (size_t k = 0; k < t2_s.size(); ++k) {
        if (!(t2_s[k] > 0.0)) throw ValidationError("t2_s[" + std::to_string(k) + "]", "must be positive");
    }
    if (!labels.empty()) {
        if (int(labels.size()) != count) throw ValidationError("labels", "expected " + std::to_string(count) + " entries");
        std::set<std::string> seen;
        for (size_t k = 0; k < labels.size(); ++k) {
            if (!seen.insert(labels[k]).second) {
                throw ValidationError("labels[" + std::to_string(k) + "]", "duplicate label '" + labels[k] + "'");
            }
        }
    }
}

std::vector<std::string> SpinSystem::weak_coupling_warnings() const {
    std::vector<std::string> out;
    for (int k = 1; k <= n(); ++k) {
        for (int l = k + 1; l <= n(); ++l) {
            double jkl = std::abs(j(k, l));
            if (jkl == 0.0) continue;
            double dnu = std::abs(offsets_hz[k - 1] - offsets_hz[l - 1]);
            if (dnu == 0.0 || jkl / dnu > 0.1) {
                std::ostringstream os;
                os << "spins " << k << "," << l << ": |J|/|dnu| = " << (dnu == 0.0 ? INFINITY : jkl / dnu)
                   << " exceeds 0.1; weak-coupling Hamiltonian may be inaccurate";
                out.push_back(os.str());
            }
        }
    }
    return out;
}

SpinSystem SpinSystem::subsystem(const std::vector<int>& spins) const {
    SpinSystem out;
    out.name = name;
    int m = int(spins.size());
    out.couplings_hz = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        int k = spins[i];
        if (k < 1 || k > n()) throw std::out_of_range("spin " + std::to_string(k) + " not in system");
        out.offsets_hz.push_back(offsets_hz[k - 1]);
        if (!t2_s.empty()) out.t2_s.push_back(t2_s[k - 1]);
        if (!labels.empty()) out.labels.push_back(labels[k - 1]);
        for (int j2 = 0; j2 < m; ++j2) out.couplings_hz(i, j2) = couplings_hz(k - 1, spins[j2] - 1);
    }
    out.validate();
    return out;
}

SpinSystem make_spin_system(std::string name, std::vector<double> offsets_hz,
                            const std::vector<std::tuple<int, int, double>>& couplings) {
    SpinSystem s;
    s.name = std::move(name);
    s.offsets_hz = std::move(offsets_hz);
    s.couplings_hz = Eigen::MatrixXd::Zero(s.n(), s.n());
    for (auto& [k, l, jhz] : couplings) s.set_j(k, l, jhz);
    s.validate();
    return s;
}

Eigen::VectorXd coupling_hamiltonian_diagonal(int n, const Eigen::MatrixXd& couplings_hz) {
    unsigned d = dim_of(n);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(d);
    for (unsigned s = 0; s < d; ++s) {
        for (int k = 1; k <= n; ++k) {
            double mk = spin_bit(n, s, k) ? -0.5 : 0.5;
            for (int l = k + 1; l <= n; ++l) {
                double ml = spin_bit(n, s, l) ? -0.5 : 0.5;
                h(s) += 2.0 * std::numbers::pi * couplings_hz(k - 1, l - 1) * mk * ml;
            }
        }
    }
    return h;
}

Eigen::VectorXd coupling_hamiltonian_diagonal(const SpinSystem& s) {
    return coupling_hamiltonian_diagonal(s.n(), s.couplings_hz);
}

Eigen::VectorXd hamiltonian_diagonal(const SpinSystem& s) {
    int n = s.n();
    Eigen::VectorXd h = coupling_hamiltonian_diagonal(s);
    for (unsigned st = 0; st < dim_of(n); ++st) {
        for (int k = 1; k <= n; ++k) {
            double mk = spin_bit(n, st, k) ? -0.5 : 0.5;
            h(st) += 2.0 * std::numbers::pi * s.offsets_hz[k - 1] * mk;
        }
    }
    return h;
}

Matrix hamiltonian(const SpinSystem& s) { return hamiltonian_diagonal(s).cast<cd>().asDiagonal(); }

Matrix equilibrium_matrix(int n) {
    Matrix m = Matrix::Zero(dim_of(n), dim_of(n));
    for (int k = 1; k <= n; ++k) m += angular_momentum_op(n, k, Axis::Z);
    return m;
}

namespace {

double number_at(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "expected a number");
    return v.get<double>();
}

}  // namespace

SpinSystem parse_molecule(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("$", std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("$", "expected an object");
    static const std::set<std::string> kKeys = {"name", "offsets_hz", "couplings_hz", "t2_s", "labels"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!kKeys.count(it.key())) throw ValidationError(it.key(), "unknown key");
    }
    SpinSystem s;
    if (!doc.contains("name") || !doc["name"].is_string()) throw ValidationError("name", "expected a string");
    s.name = doc["name"].get<std::string>();
    if (!doc.contains("offsets_hz") || !doc["offsets_hz"].is_array()) {
        throw ValidationError("offsets_hz", "expected an array of numbers");
    }
    const json& offsets = doc["offsets_hz"];
    for (size_t i = 0; i < offsets.size(); ++i) {
        s.offsets_hz.push_back(number_at(offsets[i], "offsets_hz[" + std::to_string(i) + "]"));
    }
    if (s.offsets_hz.empty() || s.n() > kMaxSpins) {
        throw ValidationError("offsets_hz", "need 1.." + std::to_string(kMaxSpins) + " spins");
    }
    int n = s.n();
    s.couplings_hz = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXi given = Eigen::MatrixXi::Zero(n, n);
    if (doc.contains("couplings_hz")) {
        const json& cs = doc["couplings_hz"];
        if (!cs.is_array()) throw ValidationError("couplings_hz", "expected an array of [k, l, J]");
        for (size_t i = 0; i < cs.size(); ++i) {
            std::string path = "couplings_hz[" + std::to_string(i) + "]";
            const json& c = cs[i];
            if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number_integer()) {
                throw ValidationError(path, "expected [k, l, J] with integer spin indices");
            }
            int k = c[0].get<int>(), l = c[1].get<int>();
            double jhz = number_at(c[2], path + "[2]");
            if (k < 1 || k > n || l < 1 || l > n) throw ValidationError(path, "spin index out of range");
            if (k == l) throw ValidationError(path, "self-coupling");
            if (given(k - 1, l - 1) && s.couplings_hz(k - 1, l - 1) != jhz) {
                throw ValidationError(path, "asymmetric couplings: J(" + std::to_string(k) + "," +
                                                std::to_string(l) + ") given twice with different values");
            }
            given(k - 1, l - 1) = given(l - 1, k - 1) = 1;
            s.set_j(k, l, jhz);
        }
    }
    if (doc.contains("t2_s")) {
        const json& t2 = doc["t2_s"];
        if (!t2.is_array()) throw ValidationError("t2_s", "expected an array");
        for (size_t i = 0; i < t2.size(); ++i) s.t2_s.push_back(number_at(t2[i], "t2_s[" + std::to_string(i) + "]"));
    }
    if (doc.contains("labels")) {
        const json& lb = doc["labels"];
        if (!lb.is_array()) throw ValidationError("labels", "expected an array of strings");
        for (size_t i = 0; i < lb.size(); ++i) {
            if (!lb[i].is_string()) throw ValidationError("labels[" + std::to_string(i) + "]", "expected a string");
            s.labels.push_back(lb[i].get<std::string>());
        }
    }
    s.validate();
    return s;
}

SpinSystem load_molecule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open molecule file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_molecule(buf.str());
}

std::string molecule_to_json(const SpinSystem& s) {
    json doc;
    doc["name"] = s.name;
    doc["offsets_hz"] = s.offsets_hz;
    json cs = json::array();
    for (int k = 1; k <= s.n(); ++k)
        for (int l = k + 1; l <= s.n(); ++l)
            if (s.j(k, l) != 0.0) cs.push_back({k, l, s.j(k, l)});
    doc["couplings_hz"] = cs;
    if (!s.t2_s.empty()) doc["t2_s"] = s.t2_s;
    if (!s.labels.empty()) doc["labels"] = s.labels;
    return doc.dump(2);
}

SpinSystem dibromothiophene() {
    SpinSystem s = make_spin_system("2,3-dibromothiophene", {-65.0, 65.0}, {{1, 2, 6.0}});
    s.labels = {"H4", "H5"};
    return s;
}

SpinSystem chloronitrobenzene() {
    SpinSystem s = make_spin_system("1-chloro-2-nitrobenzene", {-160.0, -40.0, 70.0, 180.0},
                                    {{1, 2, 8.0}, {1, 3, 1.5}, {1, 4, 0.0}, {2, 3, 7.0}});
    s.labels = {"H1", "H2", "H3", "H4"};
    return s;
}

}  // namespace nmrqc
