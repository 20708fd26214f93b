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

#ifndef NMRQC_SPIN_ALGEBRA_H_
#define NMRQC_SPIN_ALGEBRA_H_

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nmrqc {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Basis order is |e1 e2 ... en> with spin 1 as the most significant bit.
// Bit 0 is the I_z = +1/2 level and comes first.
constexpr int kMaxSpins = 8;

enum class Axis { X, Y, Z };

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline unsigned dim_of(int n) { return 1u << n; }

// Value (0 or 1) of spin k (1-based) in basis index `state`.
inline int spin_bit(int n, unsigned state, int k) { return (state >> (n - k)) & 1; }

int spin_count_for_dim(Eigen::Index dim);

Matrix identity(int n);

// Kronecker embedding of the one-spin operator (Pauli / 2) at spin k.
Matrix angular_momentum_op(int n, int k, Axis axis);

// I_+ = I_x + i I_y on spin k.
Matrix raising_op(int n, int k);

// Sum over spins of I_+^k; the detection operator.
Matrix raising_observable(int n);

// Product-operator labels are strings of length n over {'1','x','y','z'},
// character i describing spin i+1. "zz" is 2 I_z^1 I_z^2, "z1" is I_z^1.
// The all-'1' label is the identity matrix.
bool valid_label(const std::string& label);
Matrix product_operator(const std::string& label);
Matrix basis_element(const std::string& label);  // accepts the identity label
std::vector<std::string> all_labels(int n);
std::string identity_label(int n);
int nontrivial_factor_count(const std::string& label);

// Human-readable form: "2 I_x^1 I_z^2", "1".
std::string label_to_text(const std::string& label);

class POExpansion {
  public:
    POExpansion() = default;
    explicit POExpansion(int n) : n_(n) {}
    POExpansion(int n, std::map<std::string, double> terms);

    int n() const { return n_; }
    const std::map<std::string, double>& terms() const { return terms_; }

    double coefficient(const std::string& label) const;
    void set(const std::string& label, double value);
    void add(const std::string& label, double value);

    Matrix matrix() const;
    // Coefficients with |c| <= tol dropped.
    POExpansion pruned(double tol = 1e-12) const;
    double max_abs_difference(const POExpansion& other) const;
    std::string to_string(double tol = 1e-12) const;

  private:
    int n_ = 0;
    std::map<std::string, double> terms_;
};

// Real coefficients tr(B^dag M) / tr(B^dag B); imaginary parts are dropped,
// so M should be Hermitian.
POExpansion po_decompose(const Matrix& m, int n);
POExpansion po_decompose(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol = 1e-12);
bool is_unitary(const Matrix& m, double tol = 1e-10);

// M - (tr M / dim) 1.
Matrix shift_and_scale(const Matrix& m);

// Subtracts the eigenvalue shared by all levels but one, so a pseudo-pure
// matrix becomes (scale) |psi><psi|. Falls back to the minimum-magnitude
// eigenvalue multiplicity rule for other inputs.
Matrix pseudo_pure_shift(const Matrix& m);

struct PseudoSpinor {
    int n = 0;
    Vector amplitudes;
    double scale = 0.0;

    Matrix matrix() const { return scale * amplitudes * amplitudes.adjoint(); }
};

std::optional<PseudoSpinor> pseudo_spinor_factor(const Matrix& m, double rank_tol = 1e-8);

Matrix kron(const Matrix& a, const Matrix& b);

// Applies a spin permutation: new spin i+1 is old spin perm[i].
Matrix permute_spins(const Matrix& m, const std::vector<int>& perm);

}  // namespace nmrqc

#endif  // NMRQC_SPIN_ALGEBRA_H_
