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

#include "nmrqc/experiments.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "nmrqc/gates.h"
#include "nmrqc/pseudo_pure.h"

namespace nmrqc {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double bin_hz(const AcquisitionParams& p) { return 1.0 / (p.points * p.dwell_s); }

class Builder {
  public:
    Builder(std::string name, std::string description) {
        r_.name = std::move(name);
        r_.description = std::move(description);
    }

    ExperimentResult& result() { return r_; }

    void check(const std::string& name, bool pass, const std::string& detail) {
        r_.assertions.push_back({name, pass, detail});
    }

    // Spectrum, peaks and analytic sticks of rho after ideal [pi/2]_y
    // readouts on `readout` (empty: acquire directly).
    const PeakList& panel(const std::string& key, const DensityState& rho, const std::vector<int>& readout,
                          const AcquisitionParams& p) {
        DensityState r = readout.empty() ? rho : apply_pulse(rho, readout, PulseAxis::Y, kPi / 2);
        r_.states[key] = r.po().pruned(1e-12);
        r_.spectra[key] = acquire(r, p);
        r_.sticks[key] = stick_spectrum(r, 0);
        r_.peaks[key] = pick_peaks(r_.spectra[key]);
        return r_.peaks[key];
    }

    // Picked peaks agree with the analytic absorptive sticks on count,
    // position (within tol) and sign.
    void check_sticks(const std::string& key, double tol) {
        const PeakList& peaks = r_.peaks[key];
        double mx = 0.0;
        for (const Peak& s : r_.sticks[key]) mx = std::max(mx, std::abs(s.amplitude));
        PeakList strong;
        for (const Peak& s : r_.sticks[key])
            if (s.phase == PeakPhase::Absorptive && std::abs(s.amplitude) >= 0.2 * mx) strong.push_back(s);
        bool ok = strong.size() == peaks.size();
        std::string detail = std::to_string(peaks.size()) + " peaks vs " + std::to_string(strong.size()) + " sticks";
        if (ok) {
            for (size_t i = 0; i < strong.size(); ++i) {
                if (std::abs(strong[i].frequency_hz - peaks[i].frequency_hz) > tol ||
                    (strong[i].amplitude > 0) != (peaks[i].amplitude > 0)) {
                    ok = false;
                    detail += "; mismatch at " + fmt(strong[i].frequency_hz) + " Hz";
                }
            }
        }
        check(key + ": peaks match analytic sticks", ok, detail);
    }

  private:
    ExperimentResult r_;
};

// Frequency of spin k's transition with the listed partner bits (others 0).
double line_hz(const SpinSystem& s, int k, const std::string& bits) {
    return transition_frequency_hz(s, k, bits_to_index(bits));
}

PeakList near(const PeakList& peaks, double lo, double hi) {
    PeakList out;
    for (const Peak& p : peaks)
        if (p.frequency_hz >= lo && p.frequency_hz <= hi) out.push_back(p);
    return out;
}

cd value_at(const Spectrum& s, double f) {
    size_t best = 0;
    for (size_t i = 1; i < s.size(); ++i)
        if (std::abs(s.frequency_hz[i] - f) < std::abs(s.frequency_hz[best] - f)) best = i;
    return s.amplitude[best];
}

// The XOR experiments on equilibrium leave 2 I_z^1 I_z^2 + I_z^2.
void xor_readouts(Builder& b, const SpinSystem& s, const DensityState& after, const AcquisitionParams& p) {
    const double tol = bin_hz(p);
    const PeakList& r1 = b.panel("readout1", after, {1}, p);
    const PeakList& r2 = b.panel("readout2", after, {2}, p);
    b.check("readout1: anti-phase doublet", r1.size() == 2 && r1[0].amplitude * r1[1].amplitude < 0,
            std::to_string(r1.size()) + " peaks");
    b.check("readout2: single peak", r2.size() == 1, std::to_string(r2.size()) + " peaks");
    if (r1.size() == 2 && r2.size() == 1) {
        double ratio = std::abs(r2[0].amplitude) / (0.5 * (std::abs(r1[0].amplitude) + std::abs(r1[1].amplitude)));
        b.result().metrics["amplitude_ratio"] = ratio;
        b.check("readout2 peak is 2x the readout1 peaks (5%)", std::abs(ratio - 2.0) <= 0.1, "ratio " + fmt(ratio));
        double expect = line_hz(s, 2, "00");
        b.check("readout2 peak sits on the spin-2 line with spin 1 in |0>",
                std::abs(r2[0].frequency_hz - expect) <= tol, fmt(r2[0].frequency_hz) + " Hz vs " + fmt(expect));
    }
    b.check_sticks("readout1", tol);
    b.check_sticks("readout2", tol);
}

ExperimentResult eq2_hard() {
    Builder b("eq2_hard", "hard [pi/2]_y on two-spin equilibrium");
    SpinSystem s = dibromothiophene();
    AcquisitionParams p;
    const double tol = bin_hz(p);
    const PeakList& pk = b.panel("hard", equilibrium_state(s), {1, 2}, p);
    b.check("four peaks", pk.size() == 4, std::to_string(pk.size()) + " peaks");
    b.check("all peaks positive",
            std::all_of(pk.begin(), pk.end(), [](const Peak& x) { return x.amplitude > 0; }), "");
    if (pk.size() == 4) {
        std::vector<double> expect = {line_hz(s, 1, "01"), line_hz(s, 1, "00"), line_hz(s, 2, "10"),
                                      line_hz(s, 2, "00")};
        for (size_t i = 0; i < 4; ++i) {
            b.check("peak " + std::to_string(i + 1) + " position", std::abs(pk[i].frequency_hz - expect[i]) <= tol,
                    fmt(pk[i].frequency_hz) + " Hz vs " + fmt(expect[i]));
        }
        double split1 = pk[0].frequency_hz - pk[1].frequency_hz, split2 = pk[2].frequency_hz - pk[3].frequency_hz;
        double sep = 0.5 * (pk[0].frequency_hz + pk[1].frequency_hz) - 0.5 * (pk[2].frequency_hz + pk[3].frequency_hz);
        b.result().metrics["splitting_1_hz"] = split1;
        b.result().metrics["splitting_2_hz"] = split2;
        b.result().metrics["doublet_separation_hz"] = sep;
        b.check("splittings equal J", std::abs(split1 - s.j(1, 2)) <= tol && std::abs(split2 - s.j(1, 2)) <= tol,
                fmt(split1) + ", " + fmt(split2) + " Hz");
        double dnu = std::abs(s.offsets_hz[0] - s.offsets_hz[1]);
        b.check("doublet separation", std::abs(sep - dnu) <= tol, fmt(sep) + " Hz");
        double lo = 1e300, hi = 0;
        for (const Peak& x : pk) {
            lo = std::min(lo, x.amplitude);
            hi = std::max(hi, x.amplitude);
        }
        b.check("equal amplitudes (5%)", hi <= 1.05 * lo, fmt(lo) + " .. " + fmt(hi));
    }
    b.check_sticks("hard", tol);
    return b.result();
}

ExperimentResult eq2_pox1() {
    Builder b("eq2_pox1", "[pi]_y^{+1} on equilibrium, soft readouts on each spin");
    SpinSystem s = dibromothiophene();
    DensityState after = execute(gate_xor_po(s, 1).recipe, equilibrium_state(s));
    b.result().states["after_gate"] = after.po().pruned(1e-12);
    xor_readouts(b, s, after, {});
    return b.result();
}

ExperimentResult eq2_scx1() {
    Builder b("eq2_scx1", "XOR_SC^1 on equilibrium, soft readouts on each spin");
    SpinSystem s = dibromothiophene();
    DensityState after = execute(gate_xor_sc(s, 1).recipe, equilibrium_state(s));
    b.result().states["after_gate"] = after.po().pruned(1e-12);
    xor_readouts(b, s, after, {});
    return b.result();
}

ExperimentResult one_bit() {
    Builder b("one_bit", "[pi/2]_y^{+1} on equilibrium, then a hard [pi/2]_y");
    SpinSystem s = dibromothiophene();
    AcquisitionParams p;
    const double tol = bin_hz(p);
    DensityState after = execute(gate_sqrt_xor_po(s, 1).recipe, equilibrium_state(s));
    const PeakList& d = b.panel("direct", after, {}, p);
    double tuned = line_hz(s, 1, "01");
    b.check("direct: single peak at the pulsed transition", d.size() == 1 && std::abs(d[0].frequency_hz - tuned) <= tol,
            std::to_string(d.size()) + " peaks, expected " + fmt(tuned) + " Hz");
    b.panel("hard", after, {1, 2}, p);
    b.check_sticks("direct", tol);
    b.check_sticks("hard", tol);
    return b.result();
}

ExperimentResult pp2_prep() {
    Builder b("pp2_prep", "two-spin pseudo-pure preparation with soft readouts");
    SpinSystem s = dibromothiophene();
    AcquisitionParams p;
    const double tol = bin_hz(p);

    // Per-gradient bookkeeping of the longitudinal polarization.
    DensityState cur = equilibrium_state(s);
    int grad = 0;
    double eq_norm = cur.rho.norm();
    for (const Instruction& ins : prep_pp2(s, +1, -1)) {
        DensityState next = execute(ins, cur);
        if (std::holds_alternative<Gradient>(ins)) {
            ++grad;
            b.result().metrics["norm_before_gradient_" + std::to_string(grad)] = cur.rho.norm() / eq_norm;
            b.result().metrics["norm_after_gradient_" + std::to_string(grad)] = next.rho.norm() / eq_norm;
        }
        cur = next;
    }
    b.result().states["prepared"] = cur.po().pruned(1e-12);
    for (int k = 1; k <= 2; ++k) {
        const PeakList& pk = b.panel("readout" + std::to_string(k), cur, {k}, p);
        double left = std::max(line_hz(s, k, "00"), line_hz(s, k, "11"));
        b.check("readout" + std::to_string(k) + ": single peak at the leftmost doublet line",
                pk.size() == 1 && std::abs(pk[0].frequency_hz - left) <= tol,
                std::to_string(pk.size()) + " peaks, expected " + fmt(left) + " Hz");
    }
    PPIdentification id = identify_pp_state(cur, p);
    b.check("decoded as -|11>", id.ok && id.bits == "11" && id.negated, id.message);
    PPIdentification id00 = identify_pp_state(execute(prep_pp2(s), equilibrium_state(s)), p);
    b.check("default signs decode as |00>", id00.ok && id00.bits == "00" && !id00.negated, id00.message);
    b.result().metrics["polarization_ratio_spin1"] = polarization_ratio(cur, 1);

    // XOR_SC^1 flips the sign of the spin-1 doublet under a hard readout.
    DensityState xored = execute(gate_xor_sc(s, 1).recipe, cur);
    b.result().states["after_xor_sc"] = xored.po().pruned(1e-12);
    const PeakList before = b.panel("hard_before", cur, {1, 2}, p);
    const PeakList after = b.panel("hard_after", xored, {1, 2}, p);
    double mid = 0.5 * (line_hz(s, 1, "00") + line_hz(s, 2, "00"));
    auto spin1 = [&](const PeakList& l) { return near(l, mid, 1e9); };
    auto spin2 = [&](const PeakList& l) { return near(l, -1e9, mid); };
    auto sign_sum = [](const PeakList& l) {
        double a = 0;
        for (const Peak& x : l) a += x.amplitude;
        return a;
    };
    bool flipped = spin1(before).size() == 2 && spin1(after).size() == 2 &&
                   sign_sum(spin1(before)) * sign_sum(spin1(after)) < 0;
    bool kept = spin2(before).size() == 2 && spin2(after).size() == 2 &&
                sign_sum(spin2(before)) * sign_sum(spin2(after)) > 0;
    b.check("XOR_SC^1 inverts the spin-1 in-phase doublet only", flipped && kept, "");
    b.check_sticks("readout1", tol);
    b.check_sticks("readout2", tol);
    return b.result();
}

ExperimentResult pp2_super() {
    Builder b("pp2_super", "XOR_SC^1 on the one-spin superposition of |00>, then [pi/2]_y^2");
    SpinSystem s = dibromothiophene();
    AcquisitionParams p;
    DensityState sup = apply_pulse(basic_pp_state(s, "00"), {1}, PulseAxis::Y, kPi / 2);
    DensityState after = execute(gate_xor_sc(s, 1).recipe, sup);
    b.result().states["superposition"] = sup.po().pruned(1e-12);
    b.panel("direct", after, {}, p);
    b.panel("readout2", after, {2}, p);
    const Spectrum& sp = b.result().spectra["readout2"];
    bool s1_disp = true, s2_abs = true;
    for (const char* bits : {"00", "01"}) {
        cd v = value_at(sp, line_hz(s, 1, bits));
        s1_disp = s1_disp && std::abs(v.imag()) > std::abs(v.real());
    }
    cd a = value_at(sp, line_hz(s, 2, "00")), c = value_at(sp, line_hz(s, 2, "10"));
    s2_abs = std::abs(a.real()) > std::abs(a.imag()) && std::abs(c.real()) > std::abs(c.imag()) &&
             a.real() * c.real() > 0;
    b.check("readout2: spin-2 doublet absorptive and in-phase", s2_abs, "");
    b.check("readout2: spin-1 doublet 90 degrees out of phase", s1_disp, "");
    return b.result();
}

ExperimentResult dqc_echo() {
    Builder b("dqc_echo", "gradient echo of the double-quantum coherence of the entangled state");
    SpinSystem s = dibromothiophene();
    const double j = s.j(1, 2);
    DensityState ent = entangled_state(s);
    EchoOptions opt;
    EchoResult pure = gradient_echo_experiment(ent, j, opt);
    const double period = 1.0 / (2 * j);
    b.result().metrics["residual_after_dephase"] = pure.residual_after_dephase;
    b.check("residual transverse magnetization < 2%", pure.residual_after_dephase < 0.02,
            fmt(100 * pure.residual_after_dephase) + " %");
    bool one = pure.echo_times_s.size() == 1;
    double dq_t = one ? pure.echo_times_s[0] : -1.0;
    b.result().metrics["dq_echo_time_s"] = dq_t;
    b.check("double-quantum echo at 1/J", one && std::abs(dq_t - 1.0 / j) <= pure.step_s + 1e-12,
            std::to_string(pure.echo_times_s.size()) + " echoes, first at " + fmt(dq_t) + " s vs " + fmt(1.0 / j));

    // Residual single-quantum coherence on spin 1 echoes first.
    DensityState mixed = make_state(s, ent.rho + 0.25 * product_operator("x1"));
    EchoResult both = gradient_echo_experiment(mixed, j, opt);
    b.result().metrics["echo_count_with_admixture"] = double(both.echo_times_s.size());
    if (both.echo_times_s.size() == 2) {
        double ratio = both.echo_times_s[1] / both.echo_times_s[0];
        b.result().metrics["sq_echo_time_s"] = both.echo_times_s[0];
        b.result().metrics["echo_time_ratio"] = ratio;
        b.check("echo time ratio 2.0 within one step",
                std::abs(both.echo_times_s[1] - 2 * both.echo_times_s[0]) <= both.step_s + 1e-12 &&
                    std::abs(both.echo_times_s[0] - period) <= both.step_s + 1e-12,
                "ratio " + fmt(ratio));
    } else {
        b.check("echo time ratio 2.0 within one step", false,
                std::to_string(both.echo_times_s.size()) + " echoes found");
    }
    b.result().spectra["post_pulse"] = pure.post_pulse_spectrum;
    b.result().peaks["post_pulse"] = pure.post_pulse_peaks;
    b.result().states["post_pulse"] = pure.post_pulse_state.po().pruned(1e-12);
    b.result().spectra["echo_top"] = pure.echo_spectrum;
    b.result().peaks["echo_top"] = pure.echo_peaks;
    b.result().states["echo_top"] = pure.echo_state.po().pruned(1e-12);
    auto antiphase = [](const PeakList& l) { return l.size() == 2 && l[0].amplitude * l[1].amplitude < 0; };
    b.check("post-pulse spectrum is an anti-phase doublet", antiphase(pure.post_pulse_peaks),
            std::to_string(pure.post_pulse_peaks.size()) + " peaks");
    b.check("echo-top spectrum is an anti-phase doublet", antiphase(pure.echo_peaks),
            std::to_string(pure.echo_peaks.size()) + " peaks");
    b.result().echo = both;
    return b.result();
}

ExperimentResult eq4_tof1() {
    Builder b("eq4_tof1", "TOF_SC^1 (controls 2, 3) on four-spin equilibrium, [pi/2]_y^1 readout");
    SpinSystem s = chloronitrobenzene();
    AcquisitionParams p;
    p.line_broadening_hz = 0.5;
    const double tol = bin_hz(p);
    for (const char* label : {"z111", "zz11", "z1z1", "zzz1"}) {
        b.panel(std::string("ref_") + label, make_state(s, product_operator(label)), {1}, p);
    }
    DensityState after = execute(gate_toffoli_sc(s, 1, 2, 3).recipe, equilibrium_state(s));
    const PeakList& pk = b.panel("toffoli", after, {1}, p);
    int negative = 0;
    for (const Peak& x : pk) negative += x.amplitude < 0;
    b.check("four spin-1 peaks", pk.size() == 4, std::to_string(pk.size()) + " peaks");
    b.check("exactly one peak inverted", negative == 1, std::to_string(negative) + " negative");
    double inv = line_hz(s, 1, "0110");
    bool at = std::any_of(pk.begin(), pk.end(),
                          [&](const Peak& x) { return x.amplitude < 0 && std::abs(x.frequency_hz - inv) <= tol; });
    b.check("inverted line has both controls in |1>", at, "expected " + fmt(inv) + " Hz");
    b.check_sticks("toffoli", tol);
    return b.result();
}

const std::map<std::string, std::function<ExperimentResult()>>& registry() {
    static const std::map<std::string, std::function<ExperimentResult()>> r = {
        {"eq2_hard", eq2_hard}, {"eq2_pox1", eq2_pox1},   {"one_bit", one_bit},   {"eq2_scx1", eq2_scx1},
        {"pp2_prep", pp2_prep}, {"pp2_super", pp2_super}, {"dqc_echo", dqc_echo}, {"eq4_tof1", eq4_tof1}};
    return r;
}

}  // namespace

bool ExperimentResult::ok() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"eq2_hard", "eq2_pox1",  "one_bit",  "eq2_scx1",
                                                   "pp2_prep", "pp2_super", "dqc_echo", "eq4_tof1"};
    return names;
}

ExperimentResult run_experiment(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::invalid_argument("unknown experiment '" + name + "'");
    return it->second();
}

SpinSystem shifted_dibromothiophene() {
    SpinSystem s = dibromothiophene();
    s.name += " (carrier shifted)";
    s.offsets_hz = {165.0, 35.0};
    return s;
}

DensityState entangled_state(const SpinSystem& s) {
    DensityState sup = apply_pulse(basic_pp_state(s, "00"), {1}, PulseAxis::Y, kPi / 2);
    return execute(gate_xor_sc(s, 2).recipe, sup);
}

std::string assertions_json(const ExperimentResult& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["description"] = r.description;
    j["ok"] = r.ok();
    j["assertions"] = nlohmann::json::array();
    for (const Assertion& a : r.assertions) j["assertions"].push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    j["metrics"] = r.metrics;
    for (const auto& [k, v] : r.peaks) j["peaks"][k] = nlohmann::json::parse(peaks_json(v));
    for (const auto& [k, v] : r.states) j["states"][k] = v.to_string();
    return j.dump(2) + "\n";
}

std::vector<std::string> write_experiment(const ExperimentResult& r, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto put = [&](const std::string& file, const std::string& text) {
        fs::path path = fs::path(out_dir) / file;
        std::ofstream os(path);
        os << text;
        if (!os) throw std::ios_base::failure("cannot write " + path.string());
        written.push_back(path.string());
    };
    for (const auto& [k, v] : r.spectra) put(r.name + "_" + k + "_spectrum.csv", spectrum_csv(v));
    for (const auto& [k, v] : r.peaks) put(r.name + "_" + k + "_peaks.json", peaks_json(v));
    if (r.echo) put(r.name + "_echo.csv", echo_csv(*r.echo));
    put(r.name + "_assertions.json", assertions_json(r));
    return written;
}

}  // namespace nmrqc
