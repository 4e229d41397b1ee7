#ifndef BZO_ADIABATIC_HPP
#define BZO_ADIABATIC_HPP

#include <functional>
#include <vector>

#include "bzo/trace.hpp"
#include "bzo/units.hpp"

namespace bzo {

struct DepthSolution {
    double s = 0.0;        // signed depth, E_R
    double overlap = 0.0;  // ground-band coupling overlap at (q, s)
    int iterations = 0;
};

// Damped fixed point of s -> s_max / (1 + (x * O(s))^2) with a caller-chosen
// overlap model; O held constant reduces to the closed form
// s = s_max/(1+(xO)^2). Throws with iteration history on non-convergence.
DepthSolution depth_fixed_point(double s_max, double x,
                                const std::function<double(double)>& overlap_of_depth,
                                double s_guess, double tol = 1e-10,
                                int max_iterations = 1000, double damping = 0.5);

// Self-consistent lattice depth at quasimomentum q: the overlap model is the
// lowest Bloch band of the solver at |s| (antinode-shifted for s < 0).
DepthSolution selfconsistent_depth(double q, const ScaledParams& p, double s_guess,
                                   int basis_halfwidth = 16);

struct AdiabaticOptions {
    int samples_per_period = 256;
    double periods = 16.0;
    double q0 = 0.0;
    double s_guess = 3.0;
    int basis_halfwidth = 16;
};

struct AdiabaticResult {
    RunTrace trace;
    // Houston dynamical phase -integral E_0 dt' (scaled units, trapezoid),
    // one entry per sample. Does not affect s(t); kept for diagnostics.
    std::vector<double> houston_phase;
};

// Houston-wave track: q(t) from the acceleration theorem, s(t) the
// instantaneous fixed point, alpha the steady-state field. Exactly periodic
// in the Bloch period. The q-sweep warm-starts each point from the previous
// solution.
AdiabaticResult adiabatic_trace(const ScaledParams& p, const AdiabaticOptions& opt);

}  // namespace bzo

#endif
