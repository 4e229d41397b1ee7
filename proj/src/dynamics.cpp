#include "bzo/dynamics.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "bzo/adiabatic.hpp"
#include "bzo/bandstructure.hpp"
#include "bzo/cavity.hpp"
#include "bzo/constants.hpp"

namespace bzo {

using constants::pi;

namespace {

// (-1)^n diagonal unitary: shifts a node-centered Bloch state by a quarter
// period, producing the antinode-centered state of the attractive lattice.
void apply_antinode_shift(Eigen::VectorXcd& c, int M) {
    for (int i = 0; i < c.size(); ++i)
        if (((i - M) & 1) != 0) c(i) = -c(i);
}

}  // namespace

AtomStepper::AtomStepper(int basis_halfwidth) : M_(basis_halfwidth) {
    if (M_ < 4) throw std::invalid_argument("AtomStepper: basis_halfwidth must be >= 4");
    const int L = 2 * M_ + 1;
    // cos^2 coupling matrix P = 1/2 I + 1/4 (shift+ + shift-) truncated to
    // the open chain: eigenvalues 1/2 + cos(j pi/(L+1))/2, sine eigenvectors.
    sine_modes_.resize(L, L);
    potential_eigs_.resize(L);
    const double norm = std::sqrt(2.0 / (L + 1));
    for (int j = 1; j <= L; ++j) {
        potential_eigs_(j - 1) = 0.5 + 0.5 * std::cos(j * pi / (L + 1));
        for (int n = 1; n <= L; ++n)
            sine_modes_(n - 1, j - 1) = norm * std::sin(n * j * pi / (L + 1));
    }
    work_.resize(L);
}

void AtomStepper::apply_potential(Eigen::VectorXcd& coeffs, double s, double theta) const {
    work_.noalias() = sine_modes_.transpose() * coeffs;
    for (int j = 0; j < work_.size(); ++j)
        work_(j) *= std::polar(1.0, -s * potential_eigs_(j) * theta);
    coeffs.noalias() = sine_modes_ * work_;
}

void AtomStepper::apply_kinetic(Eigen::VectorXcd& coeffs, double q_start,
                                double f_tilde, double theta) const {
    // integral of (2n+q(t'))^2 over the sweep: theta*[(2n+q_mid)^2 + (f theta)^2/12]
    const double q_mid = q_start - 0.5 * f_tilde * theta;
    const double spread = f_tilde * theta * f_tilde * theta / 12.0;
    for (int i = 0; i < coeffs.size(); ++i) {
        const double kn = 2.0 * (i - M_) + q_mid;
        coeffs(i) *= std::polar(1.0, -theta * (kn * kn + spread));
    }
}

void AtomStepper::substep(Eigen::VectorXcd& coeffs, double s, double q_start,
                          double f_tilde, double dt) const {
    apply_potential(coeffs, s, 0.5 * dt);
    apply_kinetic(coeffs, q_start, f_tilde, dt);
    apply_potential(coeffs, s, 0.5 * dt);
}

InitResult initialize(const ScaledParams& p, double s_guess, double q0, int basis_halfwidth) {
    if (!(std::abs(s_guess) > 0.0))
        throw std::invalid_argument("initialize: s_guess must be nonzero");
    const auto fp = selfconsistent_depth(q0, p, s_guess, basis_halfwidth);
    InitResult r;
    r.s0 = fp.s;
    r.iterations = fp.iterations;
    const BlochSolution sol = solve_bloch(q0, std::abs(fp.s), basis_halfwidth);
    r.ground = sol.coeffs.col(0).cast<std::complex<double>>();
    if (fp.s < 0.0) apply_antinode_shift(r.ground, basis_halfwidth);
    r.overlap0 = coupling_overlap(Eigen::Ref<const Eigen::VectorXcd>(r.ground));
    r.alpha = steady_alpha(p.eta, p.kappa, p.n_atoms, p.g0 * p.g0 * r.overlap0, p.delta);
    return r;
}

namespace {

struct StepGrid {
    double dt;
    double sample_dt;
    double duration;
    int stride;
    int n_samples;
};

StepGrid make_grid(const ScaledParams& p, const NumericsSpec& n) {
    StepGrid g{};
    const bool has_period = p.f_tilde != 0.0;
    if (n.dt > 0.0) {
        g.dt = n.dt;
    } else if (has_period) {
        if (n.steps_per_period <= 0)
            throw std::invalid_argument("numerics: steps_per_period must be positive");
        g.dt = p.tau_B_scaled / n.steps_per_period;
    } else {
        throw std::invalid_argument("numerics: force is zero, absolute dt required");
    }
    if (n.sample_dt > 0.0) {
        g.sample_dt = n.sample_dt;
    } else if (has_period) {
        if (n.samples_per_period <= 0 || n.steps_per_period % n.samples_per_period != 0)
            throw std::invalid_argument("numerics: samples_per_period must divide steps_per_period");
        g.sample_dt = p.tau_B_scaled / n.samples_per_period;
    } else {
        throw std::invalid_argument("numerics: force is zero, absolute sample_dt required");
    }
    if (n.duration > 0.0) {
        g.duration = n.duration;
    } else if (has_period) {
        if (!(n.periods > 0.0)) throw std::invalid_argument("numerics: periods must be positive");
        g.duration = n.periods * p.tau_B_scaled;
    } else {
        throw std::invalid_argument("numerics: force is zero, absolute duration required");
    }
    const double stride = g.sample_dt / g.dt;
    g.stride = static_cast<int>(std::lround(stride));
    if (g.stride < 1 || std::abs(stride - g.stride) > 1e-9)
        throw std::invalid_argument("numerics: sample_dt must be an integer multiple of dt");
    g.n_samples = static_cast<int>(std::lround(g.duration / g.sample_dt)) + 1;
    return g;
}

}  // namespace

const char* run_mode_name(RunMode mode) {
    return mode == RunMode::Full ? "full" : "eliminated";
}

RunTrace simulate(const ScaledParams& p, const InitSpec& init,
                  const NumericsSpec& numerics, RunMode mode) {
    const int M = numerics.basis_halfwidth;
    const int L = 2 * M + 1;
    const StepGrid grid = make_grid(p, numerics);
    const AtomStepper stepper(M);
    const InitResult ic = initialize(p, init.s_guess, init.q0, M);

    const double f = p.f_tilde;
    const double g0sq = p.g0 * p.g0;
    const bool attractive = p.s_max < 0.0;

    AtomFieldState state;
    state.coeffs = ic.ground;
    state.alpha = ic.alpha;
    state.q_t = init.q0;
    state.t = 0.0;
    Eigen::VectorXcd& c = state.coeffs;
    std::complex<double>& alpha = state.alpha;
    double& q_un = state.q_t;
    double& t = state.t;

    RunTrace trace;
    trace.t.reserve(grid.n_samples);
    trace.s.reserve(grid.n_samples);
    trace.alpha.reserve(grid.n_samples);
    trace.overlap.reserve(grid.n_samples);
    trace.band_pop.reserve(grid.n_samples);
    trace.q.reserve(grid.n_samples);
    trace.meta.mode = run_mode_name(mode);
    trace.meta.time_unit = p.time_unit;
    trace.meta.recoil_energy = p.recoil_energy;
    trace.meta.omega_B = p.omega_B;
    trace.meta.dt = grid.dt;
    trace.meta.sample_dt = grid.sample_dt;
    trace.meta.duration = grid.duration;
    trace.meta.basis_halfwidth = M;
    trace.meta.q0 = init.q0;
    trace.meta.s0 = ic.s0;

    Eigen::VectorXcd c_work(L), projected(L);

    auto record = [&]() {
        const double O = coupling_overlap(Eigen::Ref<const Eigen::VectorXcd>(c));
        std::complex<double> a_rec = alpha;
        if (mode == RunMode::Eliminated)
            a_rec = steady_alpha(p.eta, p.kappa, p.n_atoms, g0sq * O, p.delta);
        const double s_rec = depth_from_alpha(a_rec, p.g0, p.delta);

        // truncation and unitarity guards
        const double edge = std::max(std::norm(c(0)), std::norm(c(L - 1)));
        trace.meta.edge_population = std::max(trace.meta.edge_population, edge);
        if (edge > numerics.edge_population_tol) {
            std::ostringstream os;
            os << "basis truncation: |c_edge|^2 = " << edge << " at t = " << t
               << " (increase basis_halfwidth)";
            throw std::runtime_error(os.str());
        }
        const double periods_elapsed = p.f_tilde != 0.0 ? t / p.tau_B_scaled : 1.0;
        const double drift = std::abs(c.squaredNorm() - 1.0);
        trace.meta.norm_drift = std::max(trace.meta.norm_drift, drift);
        if (drift > numerics.norm_drift_tol * std::max(1.0, periods_elapsed)) {
            std::ostringstream os;
            os << "norm drift " << drift << " at t = " << t << " exceeds tolerance";
            throw std::runtime_error(os.str());
        }

        projected = c;
        if (attractive) apply_antinode_shift(projected, M);
        const Eigen::VectorXd pops =
            band_populations(projected, q_un, std::abs(s_rec), M);

        trace.t.push_back(t * p.time_unit);
        trace.s.push_back(s_rec);
        trace.alpha.push_back(a_rec);
        trace.overlap.push_back(O);
        std::array<double, kTraceBands> bp{};
        for (int b = 0; b < kTraceBands; ++b) bp[b] = pops(b);
        trace.band_pop.push_back(bp);
        trace.q.push_back(q_un);
    };

    record();
    const long total_steps = static_cast<long>(grid.stride) * (grid.n_samples - 1);
    for (long k = 0; k < total_steps; ++k) {
        if (mode == RunMode::Full) {
            const double s_t = depth_from_alpha(alpha, p.g0, p.delta);
            stepper.substep(c, s_t, q_un, f, 0.5 * grid.dt);
            const double O_mid = coupling_overlap(Eigen::Ref<const Eigen::VectorXcd>(c));
            alpha = cavity_substep(alpha, p.eta, p.kappa, p.n_atoms, g0sq * O_mid,
                                   p.delta, grid.dt);
            const double s_n = depth_from_alpha(alpha, p.g0, p.delta);
            stepper.substep(c, s_n, q_un - 0.5 * f * grid.dt, f, 0.5 * grid.dt);
        } else {
            const double O_t = coupling_overlap(Eigen::Ref<const Eigen::VectorXcd>(c));
            const auto a_t = steady_alpha(p.eta, p.kappa, p.n_atoms, g0sq * O_t, p.delta);
            c_work = c;
            stepper.substep(c_work, depth_from_alpha(a_t, p.g0, p.delta), q_un, f,
                            0.5 * grid.dt);
            const double O_mid = coupling_overlap(Eigen::Ref<const Eigen::VectorXcd>(c_work));
            const auto a_mid = steady_alpha(p.eta, p.kappa, p.n_atoms, g0sq * O_mid, p.delta);
            stepper.substep(c, depth_from_alpha(a_mid, p.g0, p.delta), q_un, f, grid.dt);
        }
        q_un -= f * grid.dt;
        t += grid.dt;
        // Brillouin-zone wrap: q -> q + 2 relabels plane waves n -> n-1
        if (q_un < -1.0) {
            q_un += 2.0;
            for (int i = 0; i < L - 1; ++i) c(i) = c(i + 1);
            c(L - 1) = 0.0;
        } else if (q_un > 1.0) {
            q_un -= 2.0;
            for (int i = L - 1; i > 0; --i) c(i) = c(i - 1);
            c(0) = 0.0;
        }
        if ((k + 1) % grid.stride == 0) record();
    }
    return trace;
}

}  // namespace bzo
