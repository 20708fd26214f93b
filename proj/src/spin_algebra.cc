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

#include "nmrqc/spin_algebra.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nmrqc {

namespace {

Matrix half_pauli(char axis) {
    Matrix m = Matrix::Zero(2, 2);
    switch (axis) {
        case '1':
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            break;
        case 'x':
            m(0, 1) = 0.5;
            m(1, 0) = 0.5;
            break;
        case 'y':
            m(0, 1) = cd(0, -0.5);
            m(1, 0) = cd(0, 0.5);
            break;
        case 'z':
            m(0, 0) = 0.5;
            m(1, 1) = -0.5;
            break;
        default:
            throw std::invalid_argument(std::string("bad factor '") + axis + "'");
    }
    return m;
}

char axis_char(Axis a) {
    switch (a) {
        case Axis::X:
            return 'x';
        case Axis::Y:
            return 'y';
        default:
            return 'z';
    }
}

void check_n(int n) {
    if (n < 1 || n > kMaxSpins) {
        throw std::out_of_range("spin count " + std::to_string(n) + " outside 1.." +
                                std::to_string(kMaxSpins));
    }
}

}  // namespace

int spin_count_for_dim(Eigen::Index dim) {
    for (int n = 1; n <= kMaxSpins; ++n) {
        if (Eigen::Index(dim_of(n)) == dim) return n;
    }
    throw ShapeError("matrix dimension " + std::to_string(dim) + " is not 2^n for n<=8");
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix identity(int n) {
    check_n(n);
    return Matrix::Identity(dim_of(n), dim_of(n));
}

Matrix angular_momentum_op(int n, int k, Axis axis) {
    check_n(n);
    if (k < 1 || k > n) {
        throw std::out_of_range("spin index " + std::to_string(k) + " outside 1.." +
                                std::to_string(n));
    }
    std::string label(n, '1');
    label[k - 1] = axis_char(axis);
    Matrix m = Matrix::Identity(1, 1);
    for (char c : label) m = kron(m, half_pauli(c));
    return m;
}

Matrix raising_op(int n, int k) {
    return angular_momentum_op(n, k, Axis::X) + cd(0, 1) * angular_momentum_op(n, k, Axis::Y);
}

Matrix raising_observable(int n) {
    check_n(n);
    Matrix m = Matrix::Zero(dim_of(n), dim_of(n));
    for (int k = 1; k <= n; ++k) m += raising_op(n, k);
    return m;
}

bool valid_label(const std::string& label) {
    if (label.empty() || int(label.size()) > kMaxSpins) return false;
    return std::all_of(label.begin(), label.end(),
                       [](char c) { return c == '1' || c == 'x' || c == 'y' || c == 'z'; });
}

int nontrivial_factor_count(const std::string& label) {
    return int(std::count_if(label.begin(), label.end(), [](char c) { return c != '1'; }));
}

std::string identity_label(int n) { return std::string(n, '1'); }

Matrix basis_element(const std::string& label) {
    if (!valid_label(label)) throw std::invalid_argument("bad product-operator label '" + label + "'");
    int q = nontrivial_factor_count(label);
    Matrix m = Matrix::Identity(1, 1);
    for (char c : label) m = kron(m, half_pauli(c));
    if (q > 0) m *= double(1u << (q - 1));
    return m;
}

Matrix product_operator(const std::string& label) {
    if (valid_label(label) && nontrivial_factor_count(label) == 0) {
        throw std::invalid_argument("product_operator needs a non-identity factor; use identity()");
    }
    return basis_element(label);
}

std::vector<std::string> all_labels(int n) {
    check_n(n);
    static const char kFactors[4] = {'1', 'x', 'y', 'z'};
    std::vector<std::string> out;
    unsigned total = 1u << (2 * n);
    out.reserve(total);
    for (unsigned code = 0; code < total; ++code) {
        std::string s(n, '1');
        for (int i = 0; i < n; ++i) s[i] = kFactors[(code >> (2 * (n - 1 - i))) & 3];
        out.push_back(s);
    }
    return out;
}

std::string label_to_text(const std::string& label) {
    int q = nontrivial_factor_count(label);
    if (q == 0) return "1";
    std::ostringstream os;
    if (q > 1) os << (1u << (q - 1)) << " ";
    bool first = true;
    for (size_t i = 0; i < label.size(); ++i) {
        if (label[i] == '1') continue;
        if (!first) os << " ";
        os << "I_" << label[i] << "^" << (i + 1);
        first = false;
    }
    return os.str();
}

POExpansion::POExpansion(int n, std::map<std::string, double> terms) : n_(n) {
    for (auto& [label, value] : terms) set(label, value);
}

double POExpansion::coefficient(const std::string& label) const {
    auto it = terms_.find(label);
    return it == terms_.end() ? 0.0 : it->second;
}

void POExpansion::set(const std::string& label, double value) {
    if (!valid_label(label) || int(label.size()) != n_) {
        throw std::invalid_argument("label '" + label + "' does not describe " +
                                    std::to_string(n_) + " spins");
    }
    terms_[label] = value;
}

void POExpansion::add(const std::string& label, double value) { set(label, coefficient(label) + value); }

Matrix POExpansion::matrix() const {
    Matrix m = Matrix::Zero(dim_of(n_), dim_of(n_));
    for (auto& [label, value] : terms_) {
        if (value != 0.0) m += value * basis_element(label);
    }
    return m;
}

POExpansion POExpansion::pruned(double tol) const {
    POExpansion out(n_);
    for (auto& [label, value] : terms_) {
        if (std::abs(value) > tol) out.terms_[label] = value;
    }
    return out;
}

double POExpansion::max_abs_difference(const POExpansion& other) const {
    double worst = 0.0;
    for (auto& [label, value] : terms_) worst = std::max(worst, std::abs(value - other.coefficient(label)));
    for (auto& [label, value] : other.terms_) worst = std::max(worst, std::abs(value - coefficient(label)));
    return worst;
}

std::string POExpansion::to_string(double tol) const {
    std::ostringstream os;
    bool first = true;
    for (auto& [label, value] : terms_) {
        if (std::abs(value) <= tol) continue;
        if (!first) os << (value < 0 ? " - " : " + ");
        else if (value < 0) os << "-";
        os << std::abs(value) << "*" << label_to_text(label);
        first = false;
    }
    return first ? "0" : os.str();
}

POExpansion po_decompose(const Matrix& m, int n) {
    if (m.rows() != m.cols() || m.rows() != Eigen::Index(dim_of(n))) {
        throw ShapeError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(dim_of(n)) + " square");
    }
    POExpansion out(n);
    for (const std::string& label : all_labels(n)) {
        Matrix b = basis_element(label);
        cd num = (b.adjoint() * m).trace();
        double den = (b.adjoint() * b).trace().real();
        double c = num.real() / den;
        if (c != 0.0) out.set(label, c);
    }
    return out;
}

POExpansion po_decompose(const Matrix& m) { return po_decompose(m, spin_count_for_dim(m.rows())); }

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

bool is_unitary(const Matrix& m, double tol) {
    return m.rows() == m.cols() &&
           (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < tol;
}

Matrix shift_and_scale(const Matrix& m) {
    cd mean = m.trace() / double(m.rows());
    return m - mean * Matrix::Identity(m.rows(), m.cols());
}

Matrix pseudo_pure_shift(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();  // ascending
    double base = ev((ev.size() - 1) / 2);
    return m - base * Matrix::Identity(m.rows(), m.cols());
}

std::optional<PseudoSpinor> pseudo_spinor_factor(const Matrix& m, double rank_tol) {
    Matrix shifted = pseudo_pure_shift(m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(shifted);
    const auto& ev = es.eigenvalues();
    Eigen::Index top = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
        if (std::abs(ev(i)) > std::abs(ev(top))) top = i;
    }
    double largest = std::abs(ev(top));
    if (largest == 0.0) return std::nullopt;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (i != top && std::abs(ev(i)) >= rank_tol * largest) return std::nullopt;
    }
    PseudoSpinor s;
    s.n = spin_count_for_dim(m.rows());
    s.scale = ev(top);
    s.amplitudes = es.eigenvectors().col(top);
    // Fix the free phase: largest component real and positive.
    Eigen::Index lead = 0;
    s.amplitudes.cwiseAbs().maxCoeff(&lead);
    s.amplitudes *= std::conj(s.amplitudes(lead)) / std::abs(s.amplitudes(lead));
    return s;
}

Matrix permute_spins(const Matrix& m, const std::vector<int>& perm) {
    int n = spin_count_for_dim(m.rows());
    if (int(perm.size()) != n) throw ShapeError("permutation length does not match spin count");
    unsigned d = dim_of(n);
    std::vector<unsigned> map(d);
    for (unsigned s = 0; s < d; ++s) {
        unsigned t = 0;
        for (int i = 1; i <= n; ++i) t |= unsigned(spin_bit(n, s, perm[i - 1])) << (n - i);
        map[s] = t;
    }
    Matrix out(d, d);
    for (unsigned r = 0; r < d; ++r)
        for (unsigned c = 0; c < d; ++c) out(map[r], map[c]) = m(r, c);
    return out;
}

}  // namespace nmrqc
