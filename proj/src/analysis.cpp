#include "bzo/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bzo/constants.hpp"

namespace bzo {

using constants::pi;
using constants::two_pi;

void fft_radix2(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const std::complex<double> wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& z : data) z /= static_cast<double>(n);
}

namespace {

void check_uniform(const std::vector<double>& t) {
    if (t.size() < 2) throw std::invalid_argument("series too short");
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs(t[i] - t[i - 1] - dt) > 1e-9 * std::max(dt, 1e-300))
            throw std::invalid_argument("non-uniform sampling");
    }
}

std::vector<double> make_window(const std::string& name, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (name == "hann") {
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1)));
    } else if (name != "rect") {
        throw std::invalid_argument("unknown window '" + name + "'");
    }
    return w;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

Spectrum spectrum(const std::vector<double>& t, const std::vector<double>& y,
                  int zero_pad, const std::string& window) {
    if (t.size() != y.size()) throw std::invalid_argument("spectrum: size mismatch");
    check_uniform(t);
    if (zero_pad < 1) throw std::invalid_argument("spectrum: zero_pad must be >= 1");
    const std::size_t n = y.size();
    const double dt = t[1] - t[0];
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    const std::vector<double> w = make_window(window, n);

    Spectrum sp;
    sp.window = window;
    sp.sample_dt_s = dt;
    sp.n_samples = n;
    sp.rbw_hz = 1.0 / (dt * static_cast<double>(n));

    std::vector<std::complex<double>> buf(next_pow2(n * static_cast<std::size_t>(zero_pad)));
    for (std::size_t i = 0; i < n; ++i) {
        const double v = (y[i] - mean) * w[i];
        buf[i] = v;
        sp.windowed_power += v * v;
    }
    fft_radix2(buf);
    sp.n_fft = buf.size();
    const std::size_t n_half = buf.size() / 2;
    sp.freq_hz.resize(n_half + 1);
    sp.amp.resize(n_half + 1);
    for (std::size_t k = 0; k <= n_half; ++k) {
        sp.freq_hz[k] = static_cast<double>(k) / (dt * static_cast<double>(buf.size()));
        sp.amp[k] = buf[k];
    }
    return sp;
}

Spectrum spectrum(const RunTrace& trace, int zero_pad, const std::string& window) {
    return spectrum(trace.t, trace.s, zero_pad, window);
}

namespace {

struct LinearFit {
    Eigen::VectorXd beta;  // [R, a_1, b_1, ..., a_K, b_K]
    double rss = 0.0;
};

LinearFit solve_linear(const std::vector<double>& t, const std::vector<double>& y,
                       double omega, int K) {
    const int n = static_cast<int>(t.size());
    const int p = 2 * K + 1;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int k = 1; k <= K; ++k) {
            X(i, 2 * k - 1) = std::cos(k * omega * t[i]);
            X(i, 2 * k) = std::sin(k * omega * t[i]);
        }
        rhs(i) = y[i];
    }
    LinearFit fit;
    fit.beta = X.colPivHouseholderQr().solve(rhs);
    fit.rss = (rhs - X * fit.beta).squaredNorm();
    return fit;
}

double seed_from_fft(const std::vector<double>& t, const std::vector<double>& y) {
    const Spectrum sp = spectrum(t, y, 4, "hann");
    // skip the DC skirt: three pre-padding resolution bandwidths
    const double f_min = 3.0 * sp.rbw_hz;
    std::size_t best = 0;
    double best_amp = -1.0;
    for (std::size_t k = 0; k < sp.freq_hz.size(); ++k) {
        if (sp.freq_hz[k] < f_min) continue;
        const double a = std::abs(sp.amp[k]);
        if (a > best_amp) {
            best_amp = a;
            best = k;
        }
    }
    if (best_amp <= 0.0) throw std::runtime_error("fit_harmonics: no spectral peak found");
    // parabolic interpolation on |A| around the peak
    double f = sp.freq_hz[best];
    if (best > 0 && best + 1 < sp.amp.size()) {
        const double am = std::abs(sp.amp[best - 1]);
        const double a0 = std::abs(sp.amp[best]);
        const double ap = std::abs(sp.amp[best + 1]);
        const double denom = am - 2.0 * a0 + ap;
        if (denom < 0.0) f += 0.5 * (am - ap) / denom * (sp.freq_hz[1] - sp.freq_hz[0]);
    }
    return two_pi * f;
}

}  // namespace

HarmonicFit fit_harmonics(const std::vector<double>& t, const std::vector<double>& y,
                          int n_harmonics, double omega_seed) {
    if (t.size() != y.size() || t.size() < 8)
        throw std::invalid_argument("fit_harmonics: bad series");
    check_uniform(t);
    if (n_harmonics < 1) throw std::invalid_argument("fit_harmonics: need >= 1 harmonic");
    const int K = n_harmonics;
    const double duration = t.back() - t.front();

    double w0 = omega_seed > 0.0 ? omega_seed : seed_from_fft(t, y);
    if (duration * w0 < 4.0 * two_pi) {
        std::ostringstream os;
        os << "fit_harmonics: series spans fewer than 4 periods of the seed ("
           << w0 / two_pi << " Hz)";
        throw std::invalid_argument(os.str());
    }

    // golden-section on the profiled RSS; the local minima of RSS(omega) are
    // spaced by the resolution bandwidth, so stay within +-0.75 RBW of the seed
    const double rbw = two_pi / duration;
    double lo = w0 - 0.75 * rbw;
    double hi = w0 + 0.75 * rbw;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = hi - gr * (hi - lo);
    double c2 = lo + gr * (hi - lo);
    double f1 = solve_linear(t, y, c1, K).rss;
    double f2 = solve_linear(t, y, c2, K).rss;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * w0; ++it) {
        if (f1 < f2) {
            hi = c2; c2 = c1; f2 = f1;
            c1 = hi - gr * (hi - lo);
            f1 = solve_linear(t, y, c1, K).rss;
        } else {
            lo = c1; c1 = c2; f1 = f2;
            c2 = lo + gr * (hi - lo);
            f2 = solve_linear(t, y, c2, K).rss;
        }
    }
    const double omega = 0.5 * (lo + hi);
    const bool interior = omega > w0 - 0.74 * rbw && omega < w0 + 0.74 * rbw;

    const int n = static_cast<int>(t.size());
    const LinearFit fit = solve_linear(t, y, omega, K);

    HarmonicFit out;
    out.omega = omega;
    out.n_harmonics = K;
    out.converged = interior;
    out.mean = fit.beta(0);
    out.amplitudes.resize(K);
    out.eps_k.resize(K);
    for (int k = 1; k <= K; ++k) {
        const double a = fit.beta(2 * k - 1);
        const double b = fit.beta(2 * k);
        out.amplitudes[k - 1] = {a, -b};
        out.eps_k[k - 1] = std::hypot(a, b) / std::abs(out.mean);
    }
    out.eps = out.eps_k[0];
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    out.eps_peak_to_peak = (*ymax - *ymin) / (2.0 * std::abs(out.mean));

    // full-Jacobian covariance at the optimum for sigma_omega
    const int p = 2 * K + 2;
    Eigen::MatrixXd J(n, p);
    for (int i = 0; i < n; ++i) {
        J(i, 0) = 1.0;
        double dmodel_domega = 0.0;
        for (int k = 1; k <= K; ++k) {
            const double ck = std::cos(k * omega * t[i]);
            const double sk = std::sin(k * omega * t[i]);
            J(i, 2 * k - 1) = ck;
            J(i, 2 * k) = sk;
            const double a = fit.beta(2 * k - 1);
            const double b = fit.beta(2 * k);
            dmodel_domega += k * t[i] * (-a * sk + b * ck);
        }
        J(i, p - 1) = dmodel_domega;
    }
    const int dof = std::max(1, n - p);
    const double sigma2 = fit.rss / dof;
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::MatrixXd cov = sigma2 * JtJ.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    out.sigma_omega = std::sqrt(std::max(0.0, cov(p - 1, p - 1)));
    out.residual_rms = std::sqrt(fit.rss / n);

    if (!interior) {
        std::ostringstream os;
        os << "fit_harmonics: refinement pinned to the bracket edge (seed "
           << w0 / two_pi << " Hz); non-convergent fit";
        throw std::runtime_error(os.str());
    }
    return out;
}

HarmonicFit fit_harmonics(const RunTrace& trace, int n_harmonics) {
    return fit_harmonics(trace.t, trace.s, n_harmonics,
                         trace.meta.omega_B > 0.0 ? trace.meta.omega_B : 0.0);
}

HarmonicFit fit_harmonics_fixed(const std::vector<double>& t,
                                const std::vector<double>& y, int n_harmonics,
                                double omega) {
    if (t.size() != y.size() || t.size() < 8)
        throw std::invalid_argument("fit_harmonics_fixed: bad series");
    if (!(omega > 0.0)) throw std::invalid_argument("fit_harmonics_fixed: omega must be positive");
    const LinearFit fit = solve_linear(t, y, omega, n_harmonics);
    HarmonicFit out;
    out.omega = omega;
    out.n_harmonics = n_harmonics;
    out.converged = true;
    out.mean = fit.beta(0);
    out.amplitudes.resize(n_harmonics);
    out.eps_k.resize(n_harmonics);
    for (int k = 1; k <= n_harmonics; ++k) {
        const double a = fit.beta(2 * k - 1);
        const double b = fit.beta(2 * k);
        out.amplitudes[k - 1] = {a, -b};
        out.eps_k[k - 1] = std::hypot(a, b) / std::abs(out.mean);
    }
    out.eps = out.eps_k[0];
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    out.eps_peak_to_peak = (*ymax - *ymin) / (2.0 * std::abs(out.mean));
    out.residual_rms = std::sqrt(fit.rss / static_cast<double>(t.size()));
    return out;
}

TraceComparison compare_traces(const RunTrace& a, const RunTrace& b, int n_harmonics) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("compare_traces: traces too short");
    const double dur_a = a.t.back() - a.t.front();
    const double dur_b = b.t.back() - b.t.front();
    const double dt_a = a.sample_dt_seconds();
    if (std::abs(dur_a - dur_b) > dt_a + 1e-12 * dur_a)
        throw std::invalid_argument("compare_traces: incompatible durations");

    // resample b onto a's grid if needed
    std::vector<double> yb(a.size());
    const double dt_b = b.sample_dt_seconds();
    const bool same_grid =
        a.size() == b.size() && std::abs(dt_a - dt_b) < 1e-12 * std::max(dt_a, dt_b) &&
        std::abs(a.t.front() - b.t.front()) < 1e-12 * std::max(dt_a, dt_b);
    if (same_grid) {
        yb.assign(b.s.begin(), b.s.end());
    } else {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double tt = a.t[i];
            const double pos = (tt - b.t.front()) / dt_b;
            const auto j = static_cast<std::ptrdiff_t>(std::floor(pos));
            if (j < 0) {
                yb[i] = b.s.front();
            } else if (j + 1 >= static_cast<std::ptrdiff_t>(b.size())) {
                yb[i] = b.s.back();
            } else {
                const double frac = pos - static_cast<double>(j);
                yb[i] = (1.0 - frac) * b.s[j] + frac * b.s[j + 1];
            }
        }
    }

    TraceComparison cmp;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.s[i] - yb[i];
        ss += d * d;
    }
    cmp.rms = std::sqrt(ss / static_cast<double>(a.size()));
    const auto [amin, amax] = std::minmax_element(a.s.begin(), a.s.end());
    cmp.peak_to_peak_a = *amax - *amin;
    cmp.rms_normalized = cmp.peak_to_peak_a > 0.0 ? cmp.rms / cmp.peak_to_peak_a : cmp.rms;

    const double omega = fit_harmonics(a, n_harmonics).omega;
    const HarmonicFit fa = fit_harmonics_fixed(a.t, a.s, n_harmonics, omega);
    const HarmonicFit fb = fit_harmonics_fixed(a.t, yb, n_harmonics, omega);
    cmp.harmonic_ratio.resize(n_harmonics);
    for (int k = 0; k < n_harmonics; ++k)
        cmp.harmonic_ratio[k] =
            std::abs(fb.amplitudes[k]) / std::max(std::abs(fa.amplitudes[k]), 1e-300);
    return cmp;
}

}  // namespace bzo
