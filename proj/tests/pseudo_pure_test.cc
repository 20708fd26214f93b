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

#include "nmrqc/pseudo_pure.h"

#include <gtest/gtest.h>

#include "oracles.h"

namespace nmrqc {
namespace {

using oracle::Terms;

Matrix projector(unsigned d, unsigned b) {
    Matrix m = Matrix::Zero(d, d);
    m(b, b) = 1.0;
    return m;
}

double max_diff(const DensityState& rho, const Terms& want) {
    return (rho.rho - oracle::matrix(want, rho.n())).cwiseAbs().maxCoeff();
}

TEST(PseudoPure, BitHelpers) {
    EXPECT_TRUE(valid_bits("0110"));
    EXPECT_FALSE(valid_bits("012"));
    EXPECT_FALSE(valid_bits(""));
    EXPECT_EQ(bits_to_index("110"), 6u);
    EXPECT_EQ(index_to_bits(3, 5), "101");
}

TEST(PseudoPure, TwoSpinBasicStates) {
    const std::map<std::string, Terms> want = {
        {"00", {{"z1", 1}, {"1z", 1}, {"zz", 1}}},
        {"01", {{"z1", 1}, {"1z", -1}, {"zz", -1}}},
        {"10", {{"z1", -1}, {"1z", 1}, {"zz", -1}}},
        {"11", {{"z1", -1}, {"1z", -1}, {"zz", 1}}},
    };
    for (const auto& [bits, terms] : want) {
        POExpansion p = basic_pp_po(bits);
        EXPECT_LT((p.matrix() - oracle::matrix(terms, 2)).cwiseAbs().maxCoeff(), 1e-14) << bits;
        // 2 |b><b| - 1/2
        Matrix shifted = 2.0 * projector(4, bits_to_index(bits)) - 0.5 * Matrix::Identity(4, 4);
        EXPECT_TRUE(p.matrix().isApprox(shifted, 1e-14)) << bits;
    }
}

TEST(PseudoPure, ThreeSpinBasicStatesAreProjectors) {
    for (unsigned b = 0; b < 8; ++b) {
        Matrix m = basic_pp_po(index_to_bits(3, b)).matrix();
        // Shifted so the seven other levels vanish: one nonzero entry at b.
        Matrix want = 4.0 * projector(8, b) - 0.5 * Matrix::Identity(8, 8);
        EXPECT_TRUE(m.isApprox(want, 1e-14)) << b;
    }
    // |011>: (-1)^{b_k} signs on every subset product.
    POExpansion p = basic_pp_po("011");
    EXPECT_DOUBLE_EQ(p.coefficient("z11"), 1.0);
    EXPECT_DOUBLE_EQ(p.coefficient("1z1"), -1.0);
    EXPECT_DOUBLE_EQ(p.coefficient("1zz"), 1.0);
    EXPECT_DOUBLE_EQ(p.coefficient("zzz"), 1.0);
}

TEST(PseudoPure, TwoSpinPreparationLineByLine) {
    SpinSystem s = dibromothiophene();
    InstructionList seq = prep_pp2(s);
    ASSERT_EQ(seq.size(), 6u);
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    const std::vector<Terms> lines = {
        {{"z1", 1}, {"1z", 0.5}, {"1y", -r3 / 2}},
        {{"z1", 1}, {"1z", 0.5}},
        {{"z1", 1 / r2}, {"1z", 0.5}, {"y1", -1 / r2}},
        {{"z1", 1 / r2}, {"1z", 0.5}, {"xz", 1 / r2}},
        {{"z1", 0.5}, {"1z", 0.5}, {"x1", -0.5}, {"xz", 0.5}, {"zz", 0.5}},
        {{"z1", 0.5}, {"1z", 0.5}, {"zz", 0.5}},
    };
    DensityState rho = equilibrium_state(s);
    for (size_t i = 0; i < seq.size(); ++i) {
        rho = execute(seq[i], rho);
        EXPECT_LT(max_diff(rho, lines[i]), 1e-10) << "after " << describe(seq[i]);
    }
    // Exactly half of the basic |00> state, and rank one after shifting.
    EXPECT_TRUE(rho.rho.isApprox(0.5 * basic_pp_po("00").matrix(), 1e-12));
    auto f = pseudo_spinor_factor(rho.rho);
    ASSERT_TRUE(f.has_value());
    EXPECT_NEAR(std::abs(f->amplitudes(0)), 1.0, 1e-10);
}

TEST(PseudoPure, FlippedPreparationGivesNegatedState) {
    SpinSystem s = dibromothiophene();
    for (auto [a, b] : {std::pair{1, -1}, {-1, 1}}) {
        DensityState rho = execute(prep_pp2(s, a, b), equilibrium_state(s));
        EXPECT_LT(max_diff(rho, {{"z1", 0.5}, {"1z", 0.5}, {"zz", -0.5}}), 1e-10);
        PPIdentification id = identify_pp_state(rho);
        EXPECT_TRUE(id.ok);
        EXPECT_EQ(id.bits, "11");
        EXPECT_TRUE(id.negated);
    }
}

TEST(PseudoPure, ThreeSpinPreparationStages) {
    SpinSystem s = chloronitrobenzene().subsystem({1, 2, 3});
    std::vector<InstructionList> stages = prep_pp3_stages(s);
    ASSERT_EQ(stages.size(), 4u);
    const std::vector<Terms> lines = {
        {{"z11", 0.25}, {"1z1", 0.5}, {"11z", 1}},
        {{"z11", 0.25}, {"1z1", 0.25}, {"11z", 1}, {"zz1", 0.25}},
        {{"z11", 0.25}, {"1z1", 0.25}, {"11z", 0.5}, {"zz1", 0.25}, {"zzz", 0.5}},
        {{"z11", 0.25}, {"1z1", 0.25}, {"11z", 0.25}, {"zz1", 0.25}, {"z1z", 0.25}, {"1zz", 0.25}, {"zzz", 0.25}},
    };
    DensityState rho = equilibrium_state(s);
    for (size_t i = 0; i < 4; ++i) {
        rho = execute(stages[i], rho);
        EXPECT_LT(max_diff(rho, lines[i]), 1e-10) << "stage " << i + 1 << ": " << rho.po().to_string();
    }
    auto f = pseudo_spinor_factor(rho.rho);
    ASSERT_TRUE(f.has_value());
    EXPECT_NEAR(std::abs(f->amplitudes(0)), 1.0, 1e-10);
    EXPECT_TRUE(rho.rho.isApprox(0.25 * basic_pp_po("000").matrix(), 1e-10));
}

TEST(PseudoPure, PreparationPreconditions) {
    EXPECT_THROW(prep_pp2(chloronitrobenzene()), InapplicableError);
    EXPECT_THROW(prep_pp3_stages(dibromothiophene()), InapplicableError);
    SpinSystem chain = make_spin_system("chain", {-100, 0, 100}, {{1, 2, 7.0}, {2, 3, 5.0}});
    EXPECT_THROW(prep_pp3_stages(chain), InapplicableError);
}

TEST(PseudoPure, IdentifiesEveryBasicState) {
    SpinSystem two = dibromothiophene();
    for (unsigned b = 0; b < 4; ++b) {
        std::string bits = index_to_bits(2, b);
        PPIdentification id = identify_pp_state(basic_pp_state(two, bits));
        EXPECT_TRUE(id.ok) << bits << ": " << id.message;
        EXPECT_EQ(id.bits, bits);
        EXPECT_FALSE(id.negated);
        EXPECT_GT(id.confidence, 0.9);
    }
    SpinSystem three = chloronitrobenzene().subsystem({1, 2, 3});
    for (unsigned b = 0; b < 8; ++b) {
        std::string bits = index_to_bits(3, b);
        PPIdentification id = identify_pp_state(basic_pp_state(three, bits));
        EXPECT_TRUE(id.ok) << bits << ": " << id.message;
        EXPECT_EQ(id.bits, bits);
    }
}

TEST(PseudoPure, RejectsNonPseudoPureState) {
    PPIdentification id = identify_pp_state(equilibrium_state(dibromothiophene()));
    EXPECT_FALSE(id.ok);
    EXPECT_FALSE(id.message.empty());
}

TEST(PseudoPure, PolarizationScaling) {
    SpinSystem two = dibromothiophene();
    DensityState pp2 = execute(prep_pp2(two), equilibrium_state(two));
    SpinSystem three = chloronitrobenzene().subsystem({1, 2, 3});
    DensityState pp3 = execute(prep_pp3(three), equilibrium_state(three));
    EXPECT_DOUBLE_EQ(polarization_bound(2), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(polarization_bound(3), 3.0 / 7.0);
    for (int k = 1; k <= 2; ++k) {
        EXPECT_NEAR(polarization_ratio(pp2, k), 0.5, 1e-10);
        EXPECT_LE(polarization_ratio(pp2, k), polarization_bound(2));
    }
    for (int k = 1; k <= 3; ++k) {
        EXPECT_NEAR(polarization_ratio(pp3, k), 0.25, 1e-10);
        EXPECT_LE(polarization_ratio(pp3, k), polarization_bound(3));
    }
}

TEST(PseudoPure, LabelErrors) {
    EXPECT_THROW(basic_pp_po("0a"), ParameterError);
    EXPECT_THROW(basic_pp_po("00000"), ParameterError);
    EXPECT_THROW(basic_pp_state(dibromothiophene(), "000"), ParameterError);
}

}  // namespace
}  // namespace nmrqc
