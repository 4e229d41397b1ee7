#ifndef BZO_SENSING_HPP
#define BZO_SENSING_HPP

#include <cstdint>

#include "bzo/units.hpp"

namespace bzo {

// Momentum-diffusion heating budget at a given intracavity photon number.
// Diffusion constants are in (hbar k_c)^2 / s; the cavity term uses the
// ground-band average sin^2(2 k_c z) -> 1/2, giving tau = tau_sp/(1+C).
// tau is the time for the momentum width to reach hbar k_c (half the
// Brillouin zone).
struct HeatingResult {
    double tau_sp = 0.0;  // spontaneous-emission time at an antinode, s
    double d_sw = 0.0;    // free-space standing-wave diffusion
    double d_cav = 0.0;   // cavity term, ground-band averaged
    double tau = 0.0;     // coherent measurement time, s
};

HeatingResult heating(const ScaledParams& p, double photon_number);

// Shot-noise frequency uncertainty sigma_omega = 2 pi tau^{-3/2} / (eps sqrt(xi R)).
struct ShotNoiseResult {
    double sigma_omega = 0.0;  // rad/s
    double sigma_ratio = 0.0;  // sigma_omega / omega_B
};

ShotNoiseResult shot_noise_sigma(double rate, double eps, double xi, double tau,
                                 double omega_B);

// Closed-form N-scaling laws at constant (s, x, eps):
//   tau        = hbar/(s x) * N C/(1+C)
//   delta      = (2 gamma / x) N C
//   sigma_omega = 2 pi s x^2 / (sqrt(xi) hbar eps) * N^-2 * (1/C + 1)^{3/2}
// s enters in absolute energy (s_er * E_R); x, C, gamma, xi come from base.
struct ScalingResult {
    double tau = 0.0;          // s
    double delta = 0.0;        // rad/s (signed like base x)
    double sigma_omega = 0.0;  // rad/s
    double g0_sq_over_kappa = 0.0;  // = 2 gamma C, rad/s
};

ScalingResult scaling_laws(const ScaledParams& base, double n_target, double s_er,
                           double eps);

// Monte-Carlo verification: Poisson counts in bins from rate
// xi R [1 + eps cos(omega t)] over [0, tau], per-trial frequency fit seeded
// at the true omega, scatter of the estimates against the formula. Trials
// whose fitted amplitude is insignificant (< 3 sigma) or whose estimate is a
// gross outlier (> 10x the robust scatter) count as failures; more than 5%
// failures invalidates the run.
struct MonteCarloResult {
    double empirical_sigma = 0.0;  // rad/s, over successful trials
    double formula_sigma = 0.0;    // rad/s
    int trials = 0;
    int failures = 0;
    bool valid = false;
};

MonteCarloResult monte_carlo_sigma(double rate, double eps, double xi, double tau,
                                   double omega, int trials, std::uint64_t seed,
                                   int bins_per_period = 16, int n_threads = 0);

// The full metrology budget for one operating point: photon number from the
// depth, heating -> tau, shot noise -> sigma_omega, and the detuning the
// scaling laws require for this (x, N, C).
struct SensitivityReport {
    double tau_sp = 0.0;
    double d_sw = 0.0;
    double d_cav = 0.0;
    double tau = 0.0;            // s
    double rate = 0.0;           // detected-side photon rate |alpha|^2 kappa, 1/s
    double epsilon = 0.0;
    double sigma_omega = 0.0;    // rad/s
    double sigma_ratio = 0.0;    // sigma_omega / omega_B
    double delta_required = 0.0; // rad/s, scaling-law detuning (2 gamma/x) N C
    double photon_number = 0.0;
};

SensitivityReport sensitivity_report(const ScaledParams& p, double s_er, double eps);

}  // namespace bzo

#endif
