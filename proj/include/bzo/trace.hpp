#ifndef BZO_TRACE_HPP
#define BZO_TRACE_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bzo {

inline constexpr int kTraceBands = 4;  // band populations recorded per sample

struct TraceMeta {
    std::string mode;            // "full" | "eliminated" | "adiabatic"
    std::string params_hash;     // hash of the resolved configuration
    double time_unit = 0.0;      // seconds per scaled time unit
    double recoil_energy = 0.0;  // J
    double omega_B = 0.0;        // rad/s
    double dt = 0.0;             // integrator step, scaled units
    double sample_dt = 0.0;      // sample spacing, scaled units
    double duration = 0.0;       // scaled units
    int basis_halfwidth = 0;
    double q0 = 0.0;
    double s0 = 0.0;             // self-consistent initial depth, E_R (signed)
    double norm_drift = 0.0;     // max ||c|^2 - 1| seen at samples
    double edge_population = 0.0;  // max |c_{+-M}|^2 seen at samples
    std::uint64_t seed = 0;
};

// Uniformly sampled time series of the coupled run. Times in seconds, depth
// in E_R (signed by detuning), alpha dimensionless, q in k_c units wrapped
// to [-1, 1].
struct RunTrace {
    std::vector<double> t;
    std::vector<double> s;
    std::vector<std::complex<double>> alpha;
    std::vector<double> overlap;
    std::vector<std::array<double, kTraceBands>> band_pop;
    std::vector<double> q;
    TraceMeta meta;

    std::size_t size() const { return t.size(); }
    double sample_dt_seconds() const { return size() > 1 ? t[1] - t[0] : 0.0; }
    double photon_number(std::size_t i) const { return std::norm(alpha[i]); }
};

}  // namespace bzo

#endif
