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

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace nmrqc {
namespace {

TEST(SpinAlgebra, ProductOperatorsMatchKroneckerConstruction) {
    for (int n = 1; n <= 3; ++n) {
        for (const std::string& l : all_labels(n)) {
            if (l == identity_label(n)) continue;
            EXPECT_TRUE(product_operator(l).isApprox(oracle::po(l), 1e-14)) << l;
        }
    }
}

TEST(SpinAlgebra, AngularMomentumCommutators) {
    for (int k = 1; k <= 3; ++k) {
        Matrix x = angular_momentum_op(3, k, Axis::X), y = angular_momentum_op(3, k, Axis::Y);
        Matrix z = angular_momentum_op(3, k, Axis::Z);
        EXPECT_TRUE((x * y - y * x).isApprox(cd(0, 1) * z));
        EXPECT_TRUE((y * z - z * y).isApprox(cd(0, 1) * x));
        Matrix other = angular_momentum_op(3, k % 3 + 1, Axis::X);
        EXPECT_NEAR((x * other - other * x).norm(), 0.0, 1e-15);
    }
}

TEST(SpinAlgebra, BasisIsOrthogonal) {
    auto labels = all_labels(2);
    ASSERT_EQ(labels.size(), 16u);
    for (const auto& a : labels) {
        for (const auto& b : labels) {
            cd ip = (basis_element(a).adjoint() * basis_element(b)).trace();
            if (a != b) EXPECT_NEAR(std::abs(ip), 0.0, 1e-14) << a << " " << b;
        }
    }
}

TEST(SpinAlgebra, IdentityLabelHandling) {
    EXPECT_THROW(product_operator("11"), std::invalid_argument);
    EXPECT_TRUE(basis_element("11").isApprox(Matrix::Identity(4, 4)));
    EXPECT_THROW(product_operator("xq"), std::invalid_argument);
    EXPECT_FALSE(valid_label(""));
    EXPECT_EQ(nontrivial_factor_count("x1z"), 2);
}

TEST(SpinAlgebra, LabelText) {
    EXPECT_EQ(label_to_text("xz"), "2 I_x^1 I_z^2");
    EXPECT_EQ(label_to_text("1y"), "I_y^2");
    EXPECT_EQ(label_to_text("zzz"), "4 I_z^1 I_z^2 I_z^3");
}

TEST(SpinAlgebra, DecomposeRoundTripsRandomHermitian) {
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int n = 1; n <= 3; ++n) {
        int d = 1 << n;
        Matrix a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = cd(g(rng), g(rng));
        Matrix h = a + a.adjoint();
        EXPECT_TRUE(po_decompose(h, n).matrix().isApprox(h, 1e-12));
    }
}

TEST(SpinAlgebra, DecomposeKnownState) {
    POExpansion p = po_decompose(oracle::po("z1") + oracle::po("1z") + 0.5 * oracle::po("xy"), 2).pruned();
    EXPECT_EQ(p.terms().size(), 3u);
    EXPECT_NEAR(p.coefficient("z1"), 1.0, 1e-15);
    EXPECT_NEAR(p.coefficient("xy"), 0.5, 1e-15);
}

TEST(SpinAlgebra, ShiftAndScale) {
    Matrix m = Matrix::Identity(4, 4) * 3.0 + oracle::po("z1");
    EXPECT_NEAR(std::abs(shift_and_scale(m).trace()), 0.0, 1e-14);

    Eigen::VectorXcd d(4);
    d << 1.5, -0.5, -0.5, -0.5;
    Matrix shifted = pseudo_pure_shift(d.asDiagonal());
    Eigen::VectorXcd want(4);
    want << 2, 0, 0, 0;
    EXPECT_TRUE(shifted.isApprox(Matrix(want.asDiagonal()), 1e-12));
}

TEST(SpinAlgebra, PseudoSpinorOfBellState) {
    Vector psi = Vector::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    Matrix m = 3.0 * psi * psi.adjoint() - 0.25 * Matrix::Identity(4, 4);
    auto f = pseudo_spinor_factor(m);
    ASSERT_TRUE(f.has_value());
    EXPECT_NEAR(std::abs(std::abs(f->amplitudes.dot(psi)) - 1.0), 0.0, 1e-10);
    EXPECT_FALSE(pseudo_spinor_factor(oracle::po("x1")).has_value());
}

TEST(SpinAlgebra, PermuteSpins) {
    EXPECT_TRUE(permute_spins(oracle::po("xz"), {2, 1}).isApprox(oracle::po("zx")));
    EXPECT_TRUE(permute_spins(oracle::po("x1y"), {3, 1, 2}).isApprox(oracle::po("yx1")));
}

TEST(SpinAlgebra, ShapeErrors) {
    EXPECT_THROW(spin_count_for_dim(6), ShapeError);
    EXPECT_EQ(spin_count_for_dim(8), 3);
    EXPECT_THROW(po_decompose(Matrix::Zero(3, 3)), ShapeError);
}

TEST(SpinAlgebra, RaisingObservable) {
    Matrix ip = raising_observable(2);
    Matrix want = oracle::po("x1") + oracle::po("1x") + cd(0, 1) * (oracle::po("y1") + oracle::po("1y"));
    EXPECT_TRUE(ip.isApprox(want));
}

}  // namespace
}  // namespace nmrqc
