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

#ifndef NMRQC_ACQUISITION_H_
#define NMRQC_ACQUISITION_H_

#include <optional>
#include <string>
#include <vector>

#include "nmrqc/engine.h"

namespace nmrqc {

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Fid {
    std::vector<cd> samples;
    double dwell_s = 0.0;
    double t0_s = 0.0;
};

// Frequency axis convention
//
// The FID is s(t) = tr(sum_k I_+^k rho(t)). A line whose coherence precesses
// as exp(-i 2 pi nu t) is displayed at +nu, so a spin with rotating-frame
// offset nu_k shows up at -nu_k, and the line of spin k whose partners sit in
// |1> lies to the left of the one with partners in |0>. frequency_hz runs in
// descending order (NMR display order, left to right).
struct Spectrum {
    std::vector<double> frequency_hz;
    std::vector<cd> amplitude;

    double spacing_hz() const;
    size_t size() const { return frequency_hz.size(); }
};

enum class PeakPhase { Absorptive, Dispersive };

struct Peak {
    double frequency_hz = 0.0;
    double amplitude = 0.0;
    PeakPhase phase = PeakPhase::Absorptive;
};
using PeakList = std::vector<Peak>;  // descending frequency

struct AcquisitionParams {
    int points = 4096;
    double dwell_s = 1e-3;
    bool apodize = true;
    double line_broadening_hz = 1.0;
    int zero_fill = 4;  // transform length = zero_fill * next power of two
};

// Free evolution under the system Hamiltonian. t2 overrides the per-spin
// T2 values stored on the system; both are optional.
Fid simulate_fid(const DensityState& rho, int points, double dwell_s, std::optional<double> t2_s = std::nullopt);

// S(nu) = dwell * sum_j s_j exp(+2 pi i nu t_j), exponential line broadening
// exp(-pi lb t) applied first when lb > 0.
Spectrum fft_spectrum(const Fid& fid, double line_broadening_hz = 0.0, int zero_fill = 1);

Spectrum acquire(const DensityState& rho, const AcquisitionParams& p = {});

// Local maxima of |Re S| above threshold * max |Re S|; frequencies refined
// by parabolic interpolation.
PeakList pick_peaks(const Spectrum& spec, double threshold = 0.2);

// Ideal [pi/2]_y readout on one spin, then one stick per single-quantum
// element (all spins), amplitudes read off the matrix. Coincident sticks add.
// readout_spin 0 skips the readout pulse.
PeakList stick_spectrum(const DensityState& rho, int readout_spin, double tol = 1e-12);

// Display frequency (Hz) of the transition of spin k with the other spins
// in the given basis state (bit k of `state` ignored).
double transition_frequency_hz(const SpinSystem& s, int k, unsigned state);

double fid_energy(const Fid& fid);            // dwell * sum |s|^2
double spectrum_energy(const Spectrum& spec);  // df * sum |S|^2

struct EchoOptions {
    int isochromats = 256;
    double gradient_cycles = 16.0;  // single-quantum turns across the sample per 1/(2J)
    int steps_per_period = 64;      // trace samples per 1/(2J)
    double trace_periods = 2.5;     // trace length in units of 1/(2J)
    int readout_spin = 2;
    AcquisitionParams acquisition{};
};

struct EchoResult {
    std::vector<double> time_s;     // measured from the start of the -z gradient
    std::vector<double> magnitude;  // |position-averaged single-quantum coherence|
    double initial_transverse = 0.0;
    double residual_after_dephase = 0.0;  // relative to the initial nonzero-order norm
    double step_s = 0.0;
    // Interior maxima that dominate a window of +-1/(8J) and exceed 10% of
    // the largest; the signal present right at t = 0 is not an echo.
    std::vector<double> echo_times_s;
    std::vector<double> echo_magnitudes;
    // Position average right after the [-pi/2] pulse, acquired without gradient.
    DensityState post_pulse_state;
    Spectrum post_pulse_spectrum;
    PeakList post_pulse_peaks;
    // Position average at the largest echo, acquired without gradient.
    DensityState echo_state;
    Spectrum echo_spectrum;
    PeakList echo_peaks;
};

// Spatially resolved gradient echo: +z gradient for 1/(2J), [-pi/2]_y on the
// readout spin, then -z gradient while the trace is recorded. Gradient
// periods carry only coherence-order phases exp(-i p g z t).
EchoResult gradient_echo_experiment(const DensityState& rho, double j_hz, const EchoOptions& opt = {});

std::string spectrum_csv(const Spectrum& s);
std::string fid_csv(const Fid& f);
std::string echo_csv(const EchoResult& e);
std::string peaks_json(const PeakList& peaks);

}  // namespace nmrqc

#endif  // NMRQC_ACQUISITION_H_
