#ifndef BZO_DYNAMICS_HPP
#define BZO_DYNAMICS_HPP

#include <Eigen/Core>
#include <complex>

#include "bzo/trace.hpp"
#include "bzo/units.hpp"

namespace bzo {

enum class RunMode { Full, Eliminated };

struct InitSpec {
    double s_guess = 3.0;  // |depth| seed for the self-consistency loop, E_R
    double q0 = 0.0;       // initial quasimomentum, k_c units
};

struct NumericsSpec {
    int basis_halfwidth = 24;    // Zener-leaked amplitude drifts one index per
                                 // Bloch period; keep headroom beyond the run length
    int steps_per_period = 4096;
    int samples_per_period = 256;
    double periods = 16.0;

    // Absolute overrides in scaled units; any positive value replaces the
    // per-period derivation. Required when force = 0 (no Bloch period).
    double dt = 0.0;
    double sample_dt = 0.0;
    double duration = 0.0;

    double norm_drift_tol = 1e-8;       // per Bloch period
    double edge_population_tol = 1e-8;  // |c_{+-M}|^2 rejection threshold
};

// Gauge-frame state: plane-wave amplitudes, unwrapped-relabelled
// quasimomentum, cavity field, scaled time.
struct AtomFieldState {
    Eigen::VectorXcd coeffs;
    double q_t = 0.0;
    std::complex<double> alpha{0.0, 0.0};
    double t = 0.0;
};

struct InitResult {
    double s0 = 0.0;          // signed depth, E_R
    double overlap0 = 0.0;
    Eigen::VectorXcd ground;  // lowest-band state (antinode-shifted when s0 < 0)
    std::complex<double> alpha{0.0, 0.0};
    int iterations = 0;
};

// Propagates the atomic coefficients over [0, dt] with frozen depth s
// (signed) while the quasimomentum sweeps q(t') = q_start - f_tilde*t'.
// Strang splitting V(dt/2) K(dt) V(dt/2); both factors are exact in the
// truncated basis, so the map is unitary to rounding and globally
// second-order accurate for time-dependent s.
class AtomStepper {
public:
    explicit AtomStepper(int basis_halfwidth);

    void substep(Eigen::VectorXcd& coeffs, double s, double q_start,
                 double f_tilde, double dt) const;

    // exp(-i s P theta) with P the plane-wave matrix of cos^2(z); P is
    // tridiagonal Toeplitz and diagonalized analytically in the sine basis.
    void apply_potential(Eigen::VectorXcd& coeffs, double s, double theta) const;

    // Kinetic phases with the exact integral of (2n+q(t'))^2 along the
    // linear quasimomentum sweep.
    void apply_kinetic(Eigen::VectorXcd& coeffs, double q_start, double f_tilde,
                       double theta) const;

    int basis_halfwidth() const { return M_; }

private:
    int M_;
    Eigen::MatrixXd sine_modes_;       // orthogonal eigenvectors of P
    Eigen::VectorXd potential_eigs_;   // eigenvalues of P, in (0,1)
    mutable Eigen::VectorXcd work_;
};

// Self-consistent initial condition at quasimomentum q0: fixed point of
// s -> s_max / (1 + (x O(q0,s))^2) by damped iteration (w = 0.5), then the
// lowest Bloch state of that depth and the matching steady-state field.
// Throws (with iteration history) if 1000 iterations do not reach 1e-10 E_R.
InitResult initialize(const ScaledParams& p, double s_guess, double q0 = 0.0,
                      int basis_halfwidth = 24);

// Full self-consistent evolution. RunMode::Full integrates the cavity ODE
// with the exact exponential substep (atom half-step, cavity full step with
// frozen g^2, atom half-step); RunMode::Eliminated clamps alpha to the
// steady state each step with a midpoint depth evaluation.
RunTrace simulate(const ScaledParams& p, const InitSpec& init,
                  const NumericsSpec& numerics, RunMode mode);

const char* run_mode_name(RunMode mode);

}  // namespace bzo

#endif
