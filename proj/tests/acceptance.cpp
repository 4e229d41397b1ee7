// Acceptance suite: end-to-end checks of the simulator against its target
// physics. Prints one PASS/FAIL line per criterion; exit code is the number
// of failures.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "bzo/adiabatic.hpp"
#include "bzo/analysis.hpp"
#include "bzo/bandstructure.hpp"
#include "bzo/cavity.hpp"
#include "bzo/constants.hpp"
#include "bzo/dynamics.hpp"
#include "bzo/sensing.hpp"
#include "bzo/units.hpp"
#include "test_helpers.hpp"

using namespace bzo;
using constants::two_pi;

namespace {

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
    std::printf("%s  Criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, title,
                detail.c_str());
    if (!pass) ++failures;
}

template <typename F>
void criterion(int id, const char* title, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

struct Fig2Runs {
    RunTrace fig2a_full, fig2a_elim, fig2b_full;
    RunTrace fig2a_ad, fig2b_ad;
};

RunTrace adiabatic_run(const PhysicalParams& phys) {
    AdiabaticOptions opt;  // 256 samples/period, 16 periods (matches dynamics)
    return adiabatic_trace(scale(phys), opt).trace;
}

double min_p0(const RunTrace& tr) {
    double m = 1.0;
    for (const auto& bp : tr.band_pop) m = std::min(m, bp[0]);
    return m;
}

// amplitude of the largest bin within +-2 RBW of the target frequency
double peak_near(const Spectrum& sp, double f_target) {
    double best = 0.0;
    for (std::size_t k = 0; k < sp.freq_hz.size(); ++k)
        if (std::abs(sp.freq_hz[k] - f_target) <= 2.0 * sp.rbw_hz)
            best = std::max(best, std::abs(sp.amp[k]));
    return best;
}

// median amplitude over bins away from all harmonics of fB, in [lo, hi]*fB
double off_harmonic_floor(const Spectrum& sp, double f_b, double lo, double hi) {
    std::vector<double> vals;
    for (std::size_t k = 0; k < sp.freq_hz.size(); ++k) {
        const double r = sp.freq_hz[k] / f_b;
        if (r < lo || r > hi) continue;
        if (std::abs(r - std::round(r)) > 0.25) vals.push_back(std::abs(sp.amp[k]));
    }
    std::sort(vals.begin(), vals.end());
    return vals.empty() ? 0.0 : vals[vals.size() / 2];
}

double off_harmonic_power(const Spectrum& sp, double f_b, double lo, double hi) {
    double acc = 0.0;
    for (std::size_t k = 0; k < sp.freq_hz.size(); ++k) {
        const double r = sp.freq_hz[k] / f_b;
        if (r < lo || r > hi) continue;
        if (std::abs(r - std::round(r)) > 0.25) acc += std::norm(sp.amp[k]);
    }
    return acc;
}

double quad_overlap(const Eigen::VectorXd& coeffs, int M) {
    const int n_grid = 4096;
    double acc = 0.0;
    for (int g = 0; g < n_grid; ++g) {
        const double z = constants::pi * g / n_grid;
        std::complex<double> u{0.0, 0.0};
        for (int i = 0; i < coeffs.size(); ++i)
            u += coeffs(i) * std::polar(1.0, 2.0 * (i - M) * z);
        acc += std::norm(u) * std::cos(z) * std::cos(z);
    }
    return acc / n_grid;
}

}  // namespace

int main() {
    std::printf("acceptance suite: cavity Bloch-Zener simulator\n");

    // --- shared runs -------------------------------------------------------
    const PhysicalParams fig2a = testing::fig2a_params();
    const PhysicalParams fig2b = testing::fig2b_params();
    Fig2Runs runs;
    runs.fig2a_full = simulate(scale(fig2a), {}, {}, RunMode::Full);
    runs.fig2a_elim = simulate(scale(fig2a), {}, {}, RunMode::Eliminated);
    runs.fig2b_full = simulate(scale(fig2b), {}, {}, RunMode::Full);
    runs.fig2a_ad = adiabatic_run(fig2a);
    runs.fig2b_ad = adiabatic_run(fig2b);

    // --- 1: Bloch-period invariance ---------------------------------------
    criterion(1, "Bloch-period invariance", [&] {
        const double o_red3 = 1.0 - solve_bloch(0.0, 3.0, 16).overlap0;
        std::vector<HarmonicFit> fits;
        std::ostringstream detail;
        bool pass = true;
        double omega_b = 0.0;
        for (const double x : {0.1, 0.4, 1.0}) {
            const PhysicalParams phys = testing::params_for_x(x, 3.0, o_red3);
            const ScaledParams p = scale(phys);
            omega_b = p.omega_B;
            const RunTrace tr = simulate(p, {}, {}, RunMode::Full);
            const HarmonicFit fit = fit_harmonics(tr, 6);
            const double rel = std::abs(fit.omega - p.omega_B) / p.omega_B;
            pass = pass && rel < 1e-4 && std::abs(std::abs(tr.meta.s0) - 3.0) < 1e-6;
            detail << "x=" << x << ": |dw|/w=" << rel << " (sigma " << fit.sigma_omega
                   << ")  ";
            fits.push_back(fit);
        }
        for (std::size_t i = 0; i < fits.size(); ++i)
            for (std::size_t j = i + 1; j < fits.size(); ++j) {
                const double dw = std::abs(fits[i].omega - fits[j].omega);
                const double bound = 3.0 * std::hypot(fits[i].sigma_omega,
                                                      fits[j].sigma_omega);
                if (dw > bound) {
                    pass = false;
                    detail << "pair(" << i << "," << j << ") dw=" << dw
                           << " > 3 sigma=" << bound << "  ";
                }
            }
        detail << "(omega_B=" << omega_b << " rad/s)";
        report(1, "Bloch-period invariance", pass, detail.str());
    });

    // --- 2: moderate-coupling operating point --------------------------------
    criterion(2, "fig2a operating point", [&] {
        const double s0 = std::abs(runs.fig2a_full.meta.s0);
        const HarmonicFit fit = fit_harmonics(runs.fig2a_full, 6);
        const TraceComparison cmp = compare_traces(runs.fig2a_full, runs.fig2a_ad, 4);
        const bool pass_s0 = s0 > 2.55 && s0 < 3.45;                 // 3 E_R +- 15%
        const bool pass_eps = fit.eps > 0.010 && fit.eps < 0.016;    // 1.3% +- 0.3pp
        const bool pass_cmp = cmp.rms_normalized < 0.10;
        std::ostringstream detail;
        detail << "|s0|=" << s0 << " (3+-15%), eps=" << fit.eps
               << " (0.013+-0.003), FULL-vs-ADIABATIC normRMS=" << cmp.rms_normalized
               << " (<0.10)";
        report(2, "fig2a operating point", pass_s0 && pass_eps && pass_cmp, detail.str());
    });

    // --- 3: strong-coupling spectrum -----------------------------------------
    criterion(3, "fig2b spectrum and band excitation", [&] {
        const Spectrum sp_full = spectrum(runs.fig2b_full);
        const Spectrum sp_ad = spectrum(runs.fig2b_ad);
        const double f_b = scale(fig2b).omega_B / two_pi;
        std::ostringstream detail;
        bool pass = true;

        const double floor_full = off_harmonic_floor(sp_full, f_b, 5.0, 40.0);
        for (int n = 1; n <= 4; ++n) {
            const double hn = peak_near(sp_full, n * f_b);
            if (hn < 10.0 * floor_full) pass = false;
            detail << "H" << n << "/floor=" << (floor_full > 0 ? hn / floor_full : 0)
                   << " ";
        }

        const double p_full = off_harmonic_power(sp_full, f_b, 6.0, 40.0);
        const double p_ad = off_harmonic_power(sp_ad, f_b, 6.0, 40.0);
        const double broad_ratio = p_full / std::max(p_ad, 1e-300);
        if (broad_ratio < 100.0) pass = false;
        detail << "broad FULL/AD power=" << broad_ratio << " (>100) ";

        const double dip_b = min_p0(runs.fig2b_full);
        const double dip_a = min_p0(runs.fig2a_full);
        if (!(dip_b < dip_a - 1e-3)) pass = false;
        detail << "p0min: fig2b=" << dip_b << " < fig2a=" << dip_a << "; ";

        // the adiabatic track reproduces the first four harmonic amplitudes
        const TraceComparison hc = compare_traces(runs.fig2b_full, runs.fig2b_ad, 4);
        detail << "AD/FULL harmonic ratios:";
        for (int k = 0; k < 4; ++k) {
            if (hc.harmonic_ratio[k] < 0.8 || hc.harmonic_ratio[k] > 1.2) pass = false;
            detail << " " << hc.harmonic_ratio[k];
        }
        report(3, "fig2b spectrum and band excitation", pass, detail.str());
    });

    // --- 4: metrology chain -------------------------------------------------
    criterion(4, "metrology chain", [&] {
        const SensitivityReport rep = sensitivity_report(scale(fig2a), 3.0, 0.013);
        const double delta_thz = std::abs(rep.delta_required) / (two_pi * 1e12);
        const bool pass = rep.tau > 0.9 && rep.tau < 1.1 && delta_thz > 0.9 &&
                          delta_thz < 1.1 && rep.photon_number >= 1400.0 &&
                          rep.sigma_ratio >= 1.0e-6 && rep.sigma_ratio <= 1.5e-6;
        std::ostringstream detail;
        detail << "tau=" << rep.tau << " s (1.0+-10%), |Delta|=" << delta_thz
               << " THz*2pi (1+-10%), nphot=" << rep.photon_number
               << " (>=1400), sigma/w=" << rep.sigma_ratio * 1e6 << " ppm (1.0-1.5)";
        report(4, "metrology chain", pass, detail.str());
    });

    // --- 5: closed-form sigma identity --------------------------------------
    criterion(5, "closed-form sigma identity", [&] {
        std::mt19937_64 rng(2026);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            PhysicalParams phys = preset("Rb87");
            phys.g0 = two_pi * 1e6 * (0.5 + 5.0 * u(rng));
            phys.kappa = two_pi * 1e6 * (0.2 + 3.0 * u(rng));
            phys.gamma = two_pi * 1e6 * (0.5 + 5.0 * u(rng));
            phys.delta = (u(rng) < 0.5 ? -1.0 : 1.0) * two_pi * 1e11 * (1.0 + 30.0 * u(rng));
            phys.eta = two_pi * 30e6;
            phys.n_atoms = 1e4 + 1e5 * u(rng);
            phys.force = phys.atom_mass * 9.81;
            phys.detector_efficiency = 0.1 + 0.9 * u(rng);
            const ScaledParams p = scale(phys);
            const double s_er = 0.5 + 8.0 * u(rng);
            const double eps = 0.001 + 0.05 * u(rng);
            const double nphot = s_er * std::abs(p.delta) / (p.g0 * p.g0);
            const HeatingResult h = heating(p, nphot);
            const double sigma_pipe =
                shot_noise_sigma(nphot * phys.kappa, eps, phys.detector_efficiency,
                                 h.tau, p.omega_B)
                    .sigma_omega;
            const double sigma_closed =
                scaling_laws(p, phys.n_atoms, s_er, eps).sigma_omega;
            worst = std::max(worst,
                             std::abs(sigma_pipe - sigma_closed) / sigma_closed);
        }
        std::ostringstream detail;
        detail << "worst relative mismatch over 200 random parameter sets: " << worst
               << " (<1e-9)";
        report(5, "closed-form sigma identity", worst < 1e-9, detail.str());
    });

    // --- 6: Monte-Carlo CRLB check ------------------------------------------
    criterion(6, "Monte-Carlo shot-noise check", [&] {
        const MonteCarloResult mc =
            monte_carlo_sigma(1e6, 0.05, 1.0, 0.05, two_pi * 833.0, 200, 20260810);
        const double ratio = mc.empirical_sigma / mc.formula_sigma;
        const bool pass = mc.valid && ratio > 1.0 / 1.5 && ratio < 1.5;
        std::ostringstream detail;
        detail << "empirical/formula=" << ratio << " (within factor 1.5), failures="
               << mc.failures << "/" << mc.trials;
        report(6, "Monte-Carlo shot-noise check", pass, detail.str());
    });

    // --- 7: numerical hygiene ------------------------------------------------
    criterion(7, "numerical hygiene", [&] {
        std::ostringstream detail;
        bool pass = true;

        const double drift_per_period = runs.fig2a_full.meta.norm_drift / 16.0;
        if (drift_per_period > 1e-10) pass = false;
        detail << "norm drift/period=" << drift_per_period << " (<1e-10); ";

        const BlochSolution free = solve_bloch(0.37, 0.0, 8);
        std::vector<double> expect;
        for (int n = -8; n <= 8; ++n) expect.push_back((2 * n + 0.37) * (2 * n + 0.37));
        std::sort(expect.begin(), expect.end());
        double ferr = 0.0;
        for (int b = 0; b < free.energies.size(); ++b)
            ferr = std::max(ferr, std::abs(free.energies(b) - expect[b]));
        if (ferr > 1e-10) pass = false;
        detail << "free-particle err=" << ferr << "; ";

        double conv = 0.0;
        for (const double q : {0.0, 1.0}) {
            const BlochSolution a = solve_bloch(q, 10.0, 16);
            const BlochSolution b = solve_bloch(q, 10.0, 32);
            for (int band = 0; band < 4; ++band)
                conv = std::max(conv, std::abs(a.energies(band) - b.energies(band)));
        }
        if (conv > 1e-10) pass = false;
        detail << "basis-doubling dE=" << conv << " (<1e-10); ";

        const BlochSolution sol = solve_bloch(0.5, 3.0, 16);
        const double oq = std::abs(coupling_overlap(sol, 0) -
                                   quad_overlap(sol.coeffs.col(0), 16));
        if (oq > 1e-8) pass = false;
        detail << "overlap coeff-vs-quadrature=" << oq << " (<1e-8); ";

        const std::complex<double> a0{0.4, 0.8};
        const auto one = cavity_substep(a0, 1.3, 0.9, 5e4, 3e-5, 40.0, 0.8);
        const auto two = cavity_substep(cavity_substep(a0, 1.3, 0.9, 5e4, 3e-5, 40.0, 0.4),
                                        1.3, 0.9, 5e4, 3e-5, 40.0, 0.4);
        const double semi = std::abs(one - two) / std::abs(one);
        if (semi > 1e-12) pass = false;
        detail << "cavity semigroup=" << semi << " (<1e-12); ";

        // order-2 convergence of the atomic substep under a prescribed s(t)
        const int M = 12;
        const AtomStepper stepper(M);
        auto s_of_t = [](double t) { return 3.0 + 0.8 * std::sin(0.7 * t); };
        auto evolve = [&](int n_steps) {
            Eigen::VectorXcd c =
                solve_bloch(0.0, 3.0, M).coeffs.col(0).cast<std::complex<double>>();
            const double t_end = 10.0, f = 0.07;
            const double dt = t_end / n_steps;
            for (int k = 0; k < n_steps; ++k)
                stepper.substep(c, s_of_t((k + 0.5) * dt), -f * k * dt, f, dt);
            return c;
        };
        const auto ref = evolve(4096);
        const double e1 = (evolve(128) - ref).norm();
        const double e2 = (evolve(256) - ref).norm();
        const double order_ratio = e1 / e2;
        if (order_ratio < 3.0 || order_ratio > 5.0) pass = false;
        detail << "substep Richardson ratio=" << order_ratio << " (~4)";
        report(7, "numerical hygiene", pass, detail.str());
    });

    // --- 8: adiabatic elimination agreement ---------------------------------
    criterion(8, "eliminated-vs-full agreement", [&] {
        const ScaledParams p = scale(fig2a);
        const double kappa_over_wb = p.kappa / p.omega_B_scaled;
        const TraceComparison cmp = compare_traces(runs.fig2a_full, runs.fig2a_elim, 4);
        const bool pass = kappa_over_wb > 1e3 && cmp.rms_normalized < 1e-3;
        std::ostringstream detail;
        detail << "kappa/omega_B=" << kappa_over_wb << " (>1e3), normRMS="
               << cmp.rms_normalized << " (<1e-3)";
        report(8, "eliminated-vs-full agreement", pass, detail.str());
    });

    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "OK" : "FAILED",
                failures);
    return failures;
}
