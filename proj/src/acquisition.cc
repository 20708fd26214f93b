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

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace nmrqc {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double Spectrum::spacing_hz() const {
    if (frequency_hz.size() < 2) return 0.0;
    return frequency_hz[0] - frequency_hz[1];
}

Fid simulate_fid(const DensityState& rho, int points, double dwell_s, std::optional<double> t2_s) {
    if (dwell_s <= 0.0) throw ParameterError("dwell must be positive");
    if (points <= 0) throw ParameterError("point count must be positive");
    const SpinSystem& s = *rho.system;
    const int n = s.n();
    Eigen::VectorXd e = hamiltonian_diagonal(s);

    struct Line {
        cd amp;
        double omega;
        double r2;
    };
    std::vector<Line> lines;
    for (int k = 1; k <= n; ++k) {
        unsigned bit = 1u << (n - k);
        double r2 = 0.0;
        if (t2_s) {
            r2 = *t2_s > 0 ? 1.0 / *t2_s : 0.0;
        } else if (size_t(k) <= s.t2_s.size() && s.t2_s[k - 1] > 0) {
            r2 = 1.0 / s.t2_s[k - 1];
        }
        for (unsigned a = 0; a < dim_of(n); ++a) {
            if (a & bit) continue;
            unsigned b = a | bit;
            cd amp = rho.rho(b, a);
            if (amp == 0.0) continue;
            lines.push_back({amp, e(b) - e(a), r2});
        }
    }

    Fid fid;
    fid.dwell_s = dwell_s;
    fid.samples.assign(points, 0.0);
    for (int j = 0; j < points; ++j) {
        double t = j * dwell_s;
        cd acc = 0.0;
        for (const Line& l : lines) acc += l.amp * std::exp(cd(-l.r2 * t, -l.omega * t));
        fid.samples[j] = acc;
    }
    return fid;
}

Spectrum fft_spectrum(const Fid& fid, double line_broadening_hz, int zero_fill) {
    Spectrum out;
    if (fid.samples.empty()) return out;
    if (zero_fill < 1) throw ParameterError("zero fill factor must be at least 1");
    const size_t n = std::bit_ceil(fid.samples.size()) * size_t(zero_fill);
    std::vector<cd> buf(n, 0.0);
    for (size_t j = 0; j < fid.samples.size(); ++j) {
        double t = fid.t0_s + j * fid.dwell_s;
        double w = line_broadening_hz > 0 ? std::exp(-kPi * line_broadening_hz * t) : 1.0;
        buf[j] = fid.samples[j] * w;
    }
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_1d(int(n), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    const double df = 1.0 / (double(n) * fid.dwell_s);
    out.frequency_hz.resize(n);
    out.amplitude.resize(n);
    // Descending: bin n/2 - 1 first, bin -n/2 last.
    for (size_t i = 0; i < n; ++i) {
        long k = long(n / 2) - 1 - long(i);
        size_t idx = k >= 0 ? size_t(k) : size_t(k + long(n));
        out.frequency_hz[i] = k * df;
        // Shift theorem for a nonzero t0 keeps the phase referenced to t = 0.
        cd ph = fid.t0_s != 0.0 ? std::exp(cd(0, 2 * kPi * k * df * fid.t0_s)) : cd(1.0);
        out.amplitude[i] = buf[idx] * fid.dwell_s * ph;
    }
    return out;
}

Spectrum acquire(const DensityState& rho, const AcquisitionParams& p) {
    Fid f = simulate_fid(rho, p.points, p.dwell_s);
    return fft_spectrum(f, p.apodize ? p.line_broadening_hz : 0.0, p.zero_fill);
}

PeakList pick_peaks(const Spectrum& spec, double threshold) {
    PeakList out;
    const size_t n = spec.size();
    if (n < 3) return out;
    double mx = 0.0;
    for (const cd& a : spec.amplitude) mx = std::max(mx, std::abs(a.real()));
    if (mx == 0.0) return out;
    auto mag = [&](size_t i) { return std::abs(spec.amplitude[i].real()); };
    for (size_t i = 1; i + 1 < n; ++i) {
        double y0 = mag(i - 1), y1 = mag(i), y2 = mag(i + 1);
        if (y1 < threshold * mx || y1 <= y0 || y1 < y2) continue;
        double denom = y0 - 2 * y1 + y2;
        double delta = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
        Peak p;
        p.frequency_hz = spec.frequency_hz[i] - delta * spec.spacing_hz();
        p.amplitude = spec.amplitude[i].real();
        p.phase = std::abs(spec.amplitude[i].real()) >= std::abs(spec.amplitude[i].imag()) ? PeakPhase::Absorptive
                                                                                           : PeakPhase::Dispersive;
        out.push_back(p);
    }
    return out;
}

double transition_frequency_hz(const SpinSystem& s, int k, unsigned state) {
    const int n = s.n();
    unsigned bit = 1u << (n - k);
    Eigen::VectorXd e = hamiltonian_diagonal(s);
    unsigned a = state & ~bit;
    return (e(a | bit) - e(a)) / (2 * kPi);
}

PeakList stick_spectrum(const DensityState& rho, int readout_spin, double tol) {
    const SpinSystem& s = *rho.system;
    const int n = s.n();
    if (readout_spin < 0 || readout_spin > n) throw ParameterError("readout spin outside the system");
    DensityState r = readout_spin > 0 ? apply_pulse(rho, {readout_spin}, PulseAxis::Y, kPi / 2) : rho;
    Eigen::VectorXd e = hamiltonian_diagonal(s);

    struct Stick {
        double f;
        cd amp;
    };
    std::vector<Stick> sticks;
    for (int k = 1; k <= n; ++k) {
        unsigned bit = 1u << (n - k);
        for (unsigned a = 0; a < dim_of(n); ++a) {
            if (a & bit) continue;
            unsigned b = a | bit;
            double f = (e(b) - e(a)) / (2 * kPi);
            auto it = std::find_if(sticks.begin(), sticks.end(), [&](const Stick& x) { return std::abs(x.f - f) < 1e-9; });
            if (it == sticks.end()) {
                sticks.push_back({f, r.rho(b, a)});
            } else {
                it->amp += r.rho(b, a);
            }
        }
    }
    PeakList out;
    for (const Stick& st : sticks) {
        if (std::abs(st.amp) <= tol) continue;
        bool absorptive = std::abs(st.amp.real()) >= std::abs(st.amp.imag());
        out.push_back({st.f, absorptive ? st.amp.real() : st.amp.imag(),
                       absorptive ? PeakPhase::Absorptive : PeakPhase::Dispersive});
    }
    std::sort(out.begin(), out.end(), [](const Peak& a, const Peak& b) { return a.frequency_hz > b.frequency_hz; });
    return out;
}

double fid_energy(const Fid& fid) {
    double acc = 0.0;
    for (const cd& v : fid.samples) acc += std::norm(v);
    return acc * fid.dwell_s;
}

double spectrum_energy(const Spectrum& spec) {
    double acc = 0.0;
    for (const cd& v : spec.amplitude) acc += std::norm(v);
    return acc * spec.spacing_hz();
}

EchoResult gradient_echo_experiment(const DensityState& rho, double j_hz, const EchoOptions& opt) {
    if (opt.isochromats < 64) throw ParameterError("gradient echo needs at least 64 isochromats");
    if (j_hz == 0.0) throw ParameterError("gradient echo needs a nonzero coupling");
    const int n = rho.n();
    const unsigned d = dim_of(n);
    const int m = opt.isochromats;
    const double period = 1.0 / (2.0 * std::abs(j_hz));
    const double g = 2 * kPi * opt.gradient_cycles / period;

    Eigen::MatrixXi order(d, d);
    for (unsigned r = 0; r < d; ++r)
        for (unsigned c = 0; c < d; ++c) order(r, c) = coherence_order(n, r, c);

    auto nonzero_norm = [&](const Matrix& x, bool single_only) {
        double acc = 0.0;
        for (unsigned r = 0; r < d; ++r)
            for (unsigned c = 0; c < d; ++c) {
                int p = std::abs(order(r, c));
                if (single_only ? p == 1 : p != 0) acc += std::norm(x(r, c));
            }
        return std::sqrt(acc);
    };
    auto phased = [&](const Matrix& x, double phase_per_order) {
        Matrix y = x;
        for (unsigned r = 0; r < d; ++r)
            for (unsigned c = 0; c < d; ++c)
                if (order(r, c) != 0) y(r, c) *= std::exp(cd(0, -order(r, c) * phase_per_order));
        return y;
    };

    EchoResult res;
    res.step_s = period / opt.steps_per_period;
    res.initial_transverse = nonzero_norm(rho.rho, false);

    Matrix pulse = pulse_propagator(n, Pulse{{opt.readout_spin}, PulseAxis::Y, -kPi / 2}).u;
    std::vector<double> z(m);
    std::vector<Matrix> after(m);
    Matrix dephased = Matrix::Zero(d, d);
    for (int j = 0; j < m; ++j) {
        z[j] = -0.5 + (j + 0.5) / m;
        Matrix x = phased(rho.rho, g * z[j] * period);
        dephased += x / double(m);
        after[j] = conjugate(pulse, x);
    }
    res.residual_after_dephase =
        res.initial_transverse > 0 ? nonzero_norm(dephased, false) / res.initial_transverse : 0.0;

    const int steps = int(std::lround(opt.trace_periods * opt.steps_per_period));
    std::vector<Matrix> averages;
    for (int i = 0; i <= steps; ++i) {
        double t = i * res.step_s;
        Matrix avg = Matrix::Zero(d, d);
        for (int j = 0; j < m; ++j) avg += phased(after[j], -g * z[j] * t);
        avg /= double(m);
        res.time_s.push_back(t);
        res.magnitude.push_back(nonzero_norm(avg, true));
        averages.push_back(0.5 * (avg + avg.adjoint()));
    }

    const auto& y = res.magnitude;
    const int window = std::max(1, opt.steps_per_period / 4);
    double top = 0.0;
    for (size_t i = 1; i < y.size(); ++i) top = std::max(top, y[i]);
    size_t best = 0;
    for (size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] <= 0.1 * top) continue;
        size_t lo = i >= size_t(window) ? i - window : 0, hi = std::min(y.size() - 1, i + window);
        bool dominant = true;
        for (size_t k = lo; k <= hi && dominant; ++k) dominant = k == i || y[k] < y[i];
        if (!dominant) continue;
        res.echo_times_s.push_back(res.time_s[i]);
        res.echo_magnitudes.push_back(y[i]);
        if (best == 0 || y[i] > y[best]) best = i;
    }

    res.post_pulse_state = DensityState{averages.front(), rho.system};
    res.post_pulse_spectrum = acquire(res.post_pulse_state, opt.acquisition);
    res.post_pulse_peaks = pick_peaks(res.post_pulse_spectrum);
    res.echo_state = DensityState{averages[best], rho.system};
    res.echo_spectrum = acquire(res.echo_state, opt.acquisition);
    res.echo_peaks = pick_peaks(res.echo_spectrum);
    return res;
}

namespace {

std::string csv3(const std::string& head, const std::vector<double>& x, const std::vector<cd>& y) {
    std::ostringstream os;
    os << head << ",real,imag\n" << std::setprecision(12);
    for (size_t i = 0; i < x.size(); ++i) os << x[i] << ',' << y[i].real() << ',' << y[i].imag() << '\n';
    return os.str();
}

}  // namespace

std::string spectrum_csv(const Spectrum& s) { return csv3("frequency_hz", s.frequency_hz, s.amplitude); }

std::string fid_csv(const Fid& f) {
    std::vector<double> t(f.samples.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = f.t0_s + i * f.dwell_s;
    return csv3("time_s", t, f.samples);
}

std::string echo_csv(const EchoResult& e) {
    std::ostringstream os;
    os << "time_s,magnitude\n" << std::setprecision(12);
    for (size_t i = 0; i < e.time_s.size(); ++i) os << e.time_s[i] << ',' << e.magnitude[i] << '\n';
    return os.str();
}

std::string peaks_json(const PeakList& peaks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Peak& p : peaks) {
        arr.push_back({{"frequency_hz", p.frequency_hz},
                       {"amplitude", p.amplitude},
                       {"phase", p.phase == PeakPhase::Absorptive ? "absorptive" : "dispersive"}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace nmrqc
