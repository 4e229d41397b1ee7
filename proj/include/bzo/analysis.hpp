#ifndef BZO_ANALYSIS_HPP
#define BZO_ANALYSIS_HPP

#include <complex>
#include <string>
#include <vector>

#include "bzo/trace.hpp"

namespace bzo {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse = false);

// One-sided transform of the detrended, windowed series. Amplitude
// convention: A_k = sum_n x_n w_n exp(-2 pi i k n / N_fft), so Parseval reads
// sum_k full |A_k|^2 = N_fft * sum_n |x_n w_n|^2.
struct Spectrum {
    std::vector<double> freq_hz;
    std::vector<std::complex<double>> amp;
    std::string window = "hann";
    double rbw_hz = 0.0;       // 1/duration
    double sample_dt_s = 0.0;
    std::size_t n_samples = 0;  // before padding
    std::size_t n_fft = 0;
    double windowed_power = 0.0;  // sum |x_n w_n|^2, for Parseval checks
};

Spectrum spectrum(const std::vector<double>& t, const std::vector<double>& y,
                  int zero_pad = 4, const std::string& window = "hann");
Spectrum spectrum(const RunTrace& trace, int zero_pad = 4,
                  const std::string& window = "hann");

// Least-squares fit of y(t) = R [1 + sum_k eps_k cos(k w t + phi_k)] with the
// fundamental free: linear in the harmonic coefficients, refined over w by
// golden-section around an FFT seed (variable projection).
struct HarmonicFit {
    double omega = 0.0;        // fitted fundamental, rad/s
    double sigma_omega = 0.0;  // 1-sigma from the residual covariance
    double mean = 0.0;         // R
    double eps = 0.0;          // eps_1 = |A_1|/|R|
    std::vector<std::complex<double>> amplitudes;  // A_k = a_k - i b_k, k = 1..K
    std::vector<double> eps_k;
    double eps_peak_to_peak = 0.0;  // (max-min)/(2 |mean|), reported alongside
    double residual_rms = 0.0;
    int n_harmonics = 0;
    bool converged = false;
};

// omega_seed = 0 seeds from the zero-padded FFT peak. Throws if the series
// spans fewer than four periods of the seed or the refinement hits its
// bracket edge repeatedly.
HarmonicFit fit_harmonics(const std::vector<double>& t, const std::vector<double>& y,
                          int n_harmonics, double omega_seed = 0.0);
HarmonicFit fit_harmonics(const RunTrace& trace, int n_harmonics);

// Linear harmonic amplitudes at a caller-fixed fundamental (no refinement);
// used to compare traces at a common omega.
HarmonicFit fit_harmonics_fixed(const std::vector<double>& t,
                                const std::vector<double>& y, int n_harmonics,
                                double omega);

struct TraceComparison {
    double rms = 0.0;             // RMS of a-b on a's grid
    double rms_normalized = 0.0;  // divided by peak-to-peak of a
    double peak_to_peak_a = 0.0;
    std::vector<double> harmonic_ratio;  // |A_k(b)| / |A_k(a)|
};

// b is linearly resampled onto a's grid when the spacings differ; durations
// must agree to one sample.
TraceComparison compare_traces(const RunTrace& a, const RunTrace& b, int n_harmonics = 6);

}  // namespace bzo

#endif
