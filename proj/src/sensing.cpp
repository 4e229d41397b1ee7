#include "bzo/sensing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bzo/analysis.hpp"
#include "bzo/constants.hpp"

namespace bzo {

using constants::hbar;
using constants::two_pi;

HeatingResult heating(const ScaledParams& p, double photon_number) {
    if (photon_number < 0.0)
        throw std::invalid_argument("heating: photon_number must be >= 0");
    const PhysicalParams si = unscale(p);
    HeatingResult r;
    // spontaneous rate at an antinode: 1/tau_sp = 2 gamma |alpha|^2 g0^2 / delta^2
    const double rate_sp =
        2.0 * si.gamma * photon_number * si.g0 * si.g0 / (si.delta * si.delta);
    r.tau_sp = rate_sp > 0.0 ? 1.0 / rate_sp : std::numeric_limits<double>::infinity();
    r.d_sw = 0.5 * rate_sp;                       // (hbar k_c)^2 / s
    r.d_cav = r.d_sw * p.cooperativity;           // 2 D_sw C sin^2 -> D_sw C
    // sigma_p = hbar k_c via d(sigma_p^2)/dt = 2(D_sw + D_cav)
    r.tau = r.tau_sp / (1.0 + p.cooperativity);
    return r;
}

ShotNoiseResult shot_noise_sigma(double rate, double eps, double xi, double tau,
                                 double omega_B) {
    if (eps <= 0.0) throw std::invalid_argument("shot_noise_sigma: eps must be positive (no signal otherwise)");
    if (!(rate > 0.0) || !(tau > 0.0) || !(xi > 0.0) || xi > 1.0)
        throw std::invalid_argument("shot_noise_sigma: rate, tau positive and xi in (0,1] required");
    ShotNoiseResult r;
    r.sigma_omega = two_pi * std::pow(tau, -1.5) / (eps * std::sqrt(xi * rate));
    r.sigma_ratio = omega_B > 0.0 ? r.sigma_omega / omega_B : 0.0;
    return r;
}

ScalingResult scaling_laws(const ScaledParams& base, double n_target, double s_er,
                           double eps) {
    if (!(n_target >= 1.0)) throw std::invalid_argument("scaling_laws: n_target must be >= 1");
    const PhysicalParams si = unscale(base);
    const double s_abs = std::abs(s_er) * base.recoil_energy;  // J
    const double x = std::abs(base.x);
    const double C = base.cooperativity;
    ScalingResult r;
    r.tau = hbar / (s_abs * x) * n_target * C / (1.0 + C);
    r.delta = (2.0 * si.gamma / base.x) * n_target * C;
    r.sigma_omega = two_pi * s_abs * x * x /
                    (std::sqrt(base.detector_efficiency) * hbar * eps) /
                    (n_target * n_target) * std::pow(1.0 / C + 1.0, 1.5);
    r.g0_sq_over_kappa = 2.0 * si.gamma * C;
    return r;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct TrialOutcome {
    double omega = 0.0;
    bool ok = false;
};

TrialOutcome run_trial(double rate, double eps, double xi, double tau, double omega,
                       int nbins, std::uint64_t trial_seed) {
    std::mt19937_64 rng(trial_seed);
    const double dt = tau / nbins;
    std::vector<double> tb(nbins), counts(nbins);
    for (int i = 0; i < nbins; ++i) {
        tb[i] = (i + 0.5) * dt;
        const double mu = xi * rate * (1.0 + eps * std::cos(omega * tb[i])) * dt;
        std::poisson_distribution<long> poisson(std::max(mu, 0.0));
        counts[i] = static_cast<double>(poisson(rng));
    }
    TrialOutcome out;
    try {
        const HarmonicFit fit = fit_harmonics(tb, counts, 1, omega);
        out.omega = fit.omega;
        // amplitude significance: |A1| vs its LS standard error
        const double sigma_amp =
            fit.residual_rms * std::sqrt(2.0 / static_cast<double>(nbins));
        out.ok = std::abs(fit.amplitudes[0]) > 3.0 * sigma_amp;
    } catch (const std::exception&) {
        out.ok = false;
    }
    return out;
}

}  // namespace

MonteCarloResult monte_carlo_sigma(double rate, double eps, double xi, double tau,
                                   double omega, int trials, std::uint64_t seed,
                                   int bins_per_period, int n_threads) {
    if (trials < 100) throw std::invalid_argument("monte_carlo_sigma: need >= 100 trials");
    if (bins_per_period < 16)
        throw std::invalid_argument("monte_carlo_sigma: need >= 16 bins per period");
    if (!(omega > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("monte_carlo_sigma: omega and tau must be positive");

    const double periods = omega * tau / two_pi;
    const int nbins = std::max(64, static_cast<int>(std::ceil(periods * bins_per_period)));

    MonteCarloResult result;
    result.trials = trials;
    if (eps > 0.0)
        result.formula_sigma = shot_noise_sigma(rate, eps, xi, tau, 0.0).sigma_omega;

    std::vector<TrialOutcome> outcomes(trials);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers =
        n_threads > 0 ? n_threads : static_cast<int>(std::min<unsigned>(hw, trials));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1))
                outcomes[i] = run_trial(rate, eps, xi, tau, omega, nbins,
                                        splitmix64(seed ^ (0x100000001ULL * (i + 1))));
        });
    }
    for (auto& th : pool) th.join();

    std::vector<double> estimates;
    estimates.reserve(trials);
    for (const auto& o : outcomes)
        if (o.ok) estimates.push_back(o.omega);

    // robust outlier rejection: a trial locked to a noise peak is a failure
    if (estimates.size() >= 4) {
        std::vector<double> sorted = estimates;
        std::sort(sorted.begin(), sorted.end());
        const double med = sorted[sorted.size() / 2];
        std::vector<double> dev;
        dev.reserve(sorted.size());
        for (double v : sorted) dev.push_back(std::abs(v - med));
        std::sort(dev.begin(), dev.end());
        const double mad = std::max(dev[dev.size() / 2], 1e-300);
        std::vector<double> kept;
        kept.reserve(estimates.size());
        for (double v : estimates)
            if (std::abs(v - med) <= 10.0 * 1.4826 * mad) kept.push_back(v);
        estimates.swap(kept);
    }
    result.failures = trials - static_cast<int>(estimates.size());

    if (estimates.size() >= 2) {
        double mean = 0.0;
        for (double v : estimates) mean += v;
        mean /= static_cast<double>(estimates.size());
        double ss = 0.0;
        for (double v : estimates) ss += (v - mean) * (v - mean);
        result.empirical_sigma = std::sqrt(ss / (static_cast<double>(estimates.size()) - 1.0));
    }
    result.valid = result.failures <= trials / 20 && estimates.size() >= 2;
    return result;
}

SensitivityReport sensitivity_report(const ScaledParams& p, double s_er, double eps) {
    SensitivityReport r;
    r.epsilon = eps;
    // photon number from s = hbar g0^2 |alpha|^2 / delta (recoil-scaled rates)
    r.photon_number = std::abs(s_er) * std::abs(p.delta) / (p.g0 * p.g0);
    const HeatingResult h = heating(p, r.photon_number);
    r.tau_sp = h.tau_sp;
    r.d_sw = h.d_sw;
    r.d_cav = h.d_cav;
    r.tau = h.tau;
    const PhysicalParams si = unscale(p);
    r.rate = r.photon_number * si.kappa;
    if (eps > 0.0) {
        const ShotNoiseResult sn =
            shot_noise_sigma(r.rate, eps, p.detector_efficiency, r.tau, p.omega_B);
        r.sigma_omega = sn.sigma_omega;
        r.sigma_ratio = sn.sigma_ratio;
    }
    if (p.x != 0.0)
        r.delta_required = (2.0 * si.gamma / p.x) * p.n_atoms * p.cooperativity;
    return r;
}

}  // namespace bzo
