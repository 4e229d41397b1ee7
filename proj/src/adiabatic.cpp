#include "bzo/adiabatic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bzo/bandstructure.hpp"
#include "bzo/cavity.hpp"

namespace bzo {

DepthSolution depth_fixed_point(double s_max, double x,
                                const std::function<double(double)>& overlap_of_depth,
                                double s_guess, double tol, int max_iterations,
                                double damping) {
    if (!(std::abs(s_guess) > 0.0))
        throw std::invalid_argument("depth_fixed_point: s_guess must be nonzero");
    const double sign = s_max >= 0.0 ? 1.0 : -1.0;
    double s = sign * std::abs(s_guess);
    std::ostringstream history;
    for (int it = 1; it <= max_iterations; ++it) {
        const double load = x * overlap_of_depth(s);
        const double s_new = s_max / (1.0 + load * load);
        const double s_next = (1.0 - damping) * s + damping * s_new;
        const double residual = std::abs(s_next - s);
        s = s_next;
        if (residual < tol) return {s, overlap_of_depth(s), it};
        if (it > max_iterations - 5) history << " |ds|=" << residual;
    }
    std::ostringstream os;
    os << "depth fixed point did not converge in " << max_iterations
       << " iterations (s_guess=" << s_guess << ", last residuals:" << history.str()
       << "); possible multistable regime";
    throw std::runtime_error(os.str());
}

DepthSolution selfconsistent_depth(double q, const ScaledParams& p, double s_guess,
                                   int basis_halfwidth) {
    auto overlap_of_depth = [&](double s) {
        const double O = solve_bloch(q, std::abs(s), basis_halfwidth).overlap0;
        return s >= 0.0 ? O : 1.0 - O;
    };
    return depth_fixed_point(p.s_max, p.x, overlap_of_depth, s_guess);
}

AdiabaticResult adiabatic_trace(const ScaledParams& p, const AdiabaticOptions& opt) {
    if (p.f_tilde == 0.0)
        throw std::invalid_argument("adiabatic_trace: needs a nonzero force");
    if (opt.samples_per_period < 2 || !(opt.periods > 0.0))
        throw std::invalid_argument("adiabatic_trace: bad sampling spec");

    const double tau_B = p.tau_B_scaled;
    const double sample_dt = tau_B / opt.samples_per_period;
    const int n_samples = static_cast<int>(std::lround(opt.periods * opt.samples_per_period)) + 1;
    const double g0sq = p.g0 * p.g0;

    // One Bloch period of q values; s(q) is exactly periodic, so solve the
    // fixed point once per unique grid point and tile.
    std::vector<double> s_cycle(opt.samples_per_period);
    std::vector<double> o_cycle(opt.samples_per_period);
    std::vector<double> q_cycle(opt.samples_per_period);
    double warm = opt.s_guess;
    for (int i = 0; i < opt.samples_per_period; ++i) {
        const double q = std::remainder(opt.q0 - p.f_tilde * i * sample_dt, 2.0);
        const auto sol = selfconsistent_depth(q, p, warm, opt.basis_halfwidth);
        warm = sol.s;
        s_cycle[i] = sol.s;
        o_cycle[i] = sol.overlap;
        q_cycle[i] = q;
    }

    AdiabaticResult out;
    RunTrace& trace = out.trace;
    trace.meta.mode = "adiabatic";
    trace.meta.time_unit = p.time_unit;
    trace.meta.recoil_energy = p.recoil_energy;
    trace.meta.omega_B = p.omega_B;
    trace.meta.dt = sample_dt;
    trace.meta.sample_dt = sample_dt;
    trace.meta.duration = opt.periods * tau_B;
    trace.meta.basis_halfwidth = opt.basis_halfwidth;
    trace.meta.q0 = opt.q0;
    trace.meta.s0 = s_cycle[0];

    trace.t.reserve(n_samples);
    out.houston_phase.reserve(n_samples);
    double phase = 0.0;
    double e_prev = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const int j = i % opt.samples_per_period;
        const double s = s_cycle[j];
        const double O = o_cycle[j];
        const auto alpha = steady_alpha(p.eta, p.kappa, p.n_atoms, g0sq * O, p.delta);
        trace.t.push_back(i * sample_dt * p.time_unit);
        trace.s.push_back(s);
        trace.alpha.push_back(alpha);
        trace.overlap.push_back(O);
        trace.band_pop.push_back({1.0, 0.0, 0.0, 0.0});  // lowest band by construction
        trace.q.push_back(q_cycle[j]);

        // lowest-band energy for the Houston phase (offset-free convention of
        // the solver; only differences matter downstream)
        const double e_now =
            solve_bloch(q_cycle[j], std::abs(s), opt.basis_halfwidth).energies(0) +
            (s < 0.0 ? -std::abs(s) : 0.0);
        if (i > 0) phase -= 0.5 * (e_prev + e_now) * sample_dt;
        e_prev = e_now;
        out.houston_phase.push_back(phase);
    }
    return out;
}

}  // namespace bzo
