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

#include "nmrqc/acquisition.h"

#include <gtest/gtest.h>

#include "nmrqc/experiments.h"
#include "oracles.h"

namespace nmrqc {
namespace {

constexpr double kPi = oracle::kPi;

TEST(Acquisition, FidOfSingleSpinMatchesClosedForm) {
    SpinSystem s = make_spin_system("one", {40.0});
    Fid f = simulate_fid(make_state(s, oracle::po("x")), 64, 1e-3);
    ASSERT_EQ(f.samples.size(), 64u);
    for (size_t i = 0; i < 64; ++i) {
        // tr(I_+ rho(t)) with I_x -> I_x cos(wt) + I_y sin(wt) is exp(+i w t) / 2.
        cd want = 0.5 * std::polar(1.0, 2 * kPi * 40.0 * i * 1e-3);
        EXPECT_NEAR(std::abs(f.samples[i] - want), 0.0, 1e-12) << i;
    }
}

TEST(Acquisition, TransverseRelaxation) {
    SpinSystem s = make_spin_system("one", {0.0});
    Fid f = simulate_fid(make_state(s, oracle::po("x")), 11, 0.01, 0.05);
    EXPECT_NEAR(std::abs(f.samples[10]), 0.5 * std::exp(-0.1 / 0.05), 1e-12);
}

TEST(Acquisition, ParsevalWithoutZeroFill) {
    SpinSystem s = dibromothiophene();
    DensityState r = apply_pulse(equilibrium_state(s), {1, 2}, PulseAxis::Y, kPi / 2);
    Fid f = simulate_fid(r, 512, 1e-3);
    Spectrum sp = fft_spectrum(f, 0.0, 1);
    EXPECT_NEAR(spectrum_energy(sp), fid_energy(f), 1e-9 * fid_energy(f));
}

TEST(Acquisition, FrequencyAxisIsDescendingAndSignFlipped) {
    SpinSystem s = make_spin_system("one", {-50.0});
    Spectrum sp = acquire(make_state(s, oracle::po("x")));
    for (size_t i = 1; i < sp.size(); ++i) ASSERT_LT(sp.frequency_hz[i], sp.frequency_hz[i - 1]);
    PeakList p = pick_peaks(sp);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0].frequency_hz, 50.0, sp.spacing_hz());
    EXPECT_GT(p[0].amplitude, 0.0);
}

TEST(Acquisition, HardPulseSpectrum) {
    SpinSystem s = dibromothiophene();
    DensityState r = apply_pulse(equilibrium_state(s), {1, 2}, PulseAxis::Y, kPi / 2);
    PeakList p = pick_peaks(acquire(r));
    ASSERT_EQ(p.size(), 4u);
    const double bin = 1.0 / (4096 * 1e-3);
    const double want[] = {68.0, 62.0, -62.0, -68.0};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(p[i].frequency_hz, want[i], bin);
        EXPECT_GT(p[i].amplitude, 0.0);
    }
}

TEST(Acquisition, TransitionFrequencies) {
    SpinSystem s = dibromothiophene();
    // Spin 1 (offset -65) is displayed at +65; partner in |1> is the left line.
    EXPECT_NEAR(transition_frequency_hz(s, 1, 0b01), 68.0, 1e-12);
    EXPECT_NEAR(transition_frequency_hz(s, 1, 0b00), 62.0, 1e-12);
    EXPECT_NEAR(transition_frequency_hz(s, 2, 0b10), -62.0, 1e-12);
    EXPECT_NEAR(transition_frequency_hz(s, 2, 0b00), -68.0, 1e-12);
}

TEST(Acquisition, SticksForAntiPhaseDoublet) {
    SpinSystem s = dibromothiophene();
    PeakList st = stick_spectrum(make_state(s, oracle::po("xz")), 0);
    ASSERT_EQ(st.size(), 2u);
    EXPECT_NEAR(st[0].frequency_hz, 68.0, 1e-9);
    EXPECT_NEAR(st[1].frequency_hz, 62.0, 1e-9);
    EXPECT_NEAR(st[0].amplitude, -st[1].amplitude, 1e-12);
    EXPECT_EQ(st[0].phase, PeakPhase::Absorptive);
    PeakList disp = stick_spectrum(make_state(s, oracle::po("y1")), 0);
    ASSERT_EQ(disp.size(), 2u);
    EXPECT_EQ(disp[0].phase, PeakPhase::Dispersive);
}

TEST(Acquisition, SticksAfterReadout) {
    SpinSystem s = dibromothiophene();
    PeakList st = stick_spectrum(equilibrium_state(s), 2);
    ASSERT_EQ(st.size(), 2u);
    EXPECT_NEAR(st[0].frequency_hz, -62.0, 1e-9);
    EXPECT_NEAR(st[0].amplitude, st[1].amplitude, 1e-12);
    EXPECT_THROW(stick_spectrum(equilibrium_state(s), 3), ParameterError);
}

TEST(Acquisition, EntangledStateGivesNoSignal) {
    SpinSystem s = dibromothiophene();
    Fid f = simulate_fid(entangled_state(s), 1024, 1e-3);
    double mx = 0.0;
    for (cd z : f.samples) mx = std::max(mx, std::abs(z));
    EXPECT_LT(mx, 1e-12);
}

TEST(Acquisition, ParameterErrors) {
    DensityState r = equilibrium_state(dibromothiophene());
    EXPECT_THROW(simulate_fid(r, 16, 0.0), ParameterError);
    EXPECT_THROW(simulate_fid(r, 0, 1e-3), ParameterError);
    EXPECT_THROW(fft_spectrum(simulate_fid(r, 16, 1e-3), 0.0, 0), ParameterError);
}

TEST(Acquisition, GradientEchoOfEntangledState) {
    SpinSystem s = dibromothiophene();
    EchoResult e = gradient_echo_experiment(entangled_state(s), 6.0);
    EXPECT_LT(e.residual_after_dephase, 0.02);
    ASSERT_EQ(e.echo_times_s.size(), 1u);
    EXPECT_NEAR(e.echo_times_s[0], 1.0 / 6.0, e.step_s + 1e-12);
    // Right after the pulse the average holds -2 I_z^1 I_x^2, anti-phase on spin 2.
    EXPECT_NEAR(e.post_pulse_state.po().coefficient("zx"), -1.0, 1e-9);
    EXPECT_NEAR(e.echo_state.po().coefficient("xz"), 1.0, 1e-6);
}

TEST(Acquisition, GradientEchoIsDeterministic) {
    SpinSystem s = dibromothiophene();
    EchoOptions o;
    o.isochromats = 64;
    EchoResult a = gradient_echo_experiment(entangled_state(s), 6.0, o);
    EchoResult b = gradient_echo_experiment(entangled_state(s), 6.0, o);
    EXPECT_EQ(a.magnitude, b.magnitude);
    o.isochromats = 32;
    EXPECT_THROW(gradient_echo_experiment(entangled_state(s), 6.0, o), ParameterError);
    EXPECT_THROW(gradient_echo_experiment(entangled_state(s), 0.0), ParameterError);
}

TEST(Acquisition, Writers) {
    Spectrum sp{{2.0, 1.0}, {cd(1, 0), cd(0, 1)}};
    std::string csv = spectrum_csv(sp);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "frequency_hz,real,imag");
    std::string js = peaks_json({{12.5, -0.25, PeakPhase::Absorptive}});
    EXPECT_NE(js.find("\"frequency_hz\": 12.5"), std::string::npos);
    EXPECT_NE(js.find("absorptive"), std::string::npos);
}

}  // namespace
}  // namespace nmrqc
