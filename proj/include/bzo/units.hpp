#ifndef BZO_UNITS_HPP
#define BZO_UNITS_HPP

#include <string>
#include <vector>

namespace bzo {

// Dimensional experiment inputs. All rates are angular (rad/s); kappa and
// gamma are half-widths (energy decay 2*kappa, spontaneous rate 2*gamma).
struct PhysicalParams {
    double atom_mass = 0.0;            // kg
    double wavelength = 0.0;           // cavity wavelength lambda_c, m
    double g0 = 0.0;                   // single-photon coupling, rad/s
    double kappa = 0.0;                // cavity half-linewidth, rad/s
    double gamma = 0.0;                // atomic half-linewidth, rad/s
    double delta = 0.0;                // detuning omega_c - omega_a, rad/s
    double eta = 0.0;                  // pump rate, rad/s
    double n_atoms = 0.0;              // atom count N
    double force = 0.0;                // external force, N
    double detector_efficiency = 1.0;  // xi in [0,1]

    // Throws std::invalid_argument on violated invariants (delta = 0,
    // non-positive mass/wavelength/kappa/gamma, xi outside [0,1], N < 0).
    void validate() const;

    // Soft physics checks: dispersive regime |delta| >= 100*gamma and low
    // saturation eta^2 <= 0.01*(kappa*delta/g0)^2. Returns human-readable
    // warnings, empty when both hold.
    std::vector<std::string> validity_warnings() const;
};

// Species preset: fills atom_mass, default wavelength and gamma. Everything
// else stays at zero and must be supplied by the caller; explicit settings
// override preset values.
PhysicalParams preset(const std::string& name);
std::vector<std::string> preset_names();

// The dimensionless working set. Lengths in 1/k_c, energies in
// E_R = hbar^2 k_c^2 / (2 m), times in hbar/E_R. A rate omega in rad/s maps
// to omega * hbar/E_R.
struct ScaledParams {
    // unit system
    double k_c = 0.0;           // lattice wavevector, 1/m
    double recoil_energy = 0.0; // E_R, J
    double time_unit = 0.0;     // hbar/E_R, s

    // scaled inputs
    double g0 = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    double n_atoms = 0.0;
    double f_tilde = 0.0;       // F/(k_c E_R)
    double detector_efficiency = 1.0;

    // derived quantities
    double omega_B = 0.0;        // Bloch frequency F d / hbar, rad/s
    double omega_B_scaled = 0.0; // = pi * f_tilde (exact identity)
    double tau_B_scaled = 0.0;   // Bloch period in scaled time, 2/|f_tilde|
    double cooperativity = 0.0;  // C = g0^2/(2 kappa gamma)
    double x = 0.0;              // N g0^2/(kappa delta), sign follows delta
    double photon_flux = 0.0;    // I = eta^2/kappa, photons/s
    double s_max = 0.0;          // empty-cavity depth hbar I g0^2/(delta kappa), E_R (signed)
    double omega_ho = 0.0;       // 2 sqrt(|s_max|) E_R/hbar, rad/s (at the empty-cavity depth)

    double scaled_rate(double omega_si) const { return omega_si * time_unit; }
    double si_rate(double omega_scaled) const { return omega_scaled / time_unit; }
};

// Convert SI inputs to recoil units; validates first. Round-trips with
// unscale() to 1e-12 relative.
ScaledParams scale(const PhysicalParams& p);
PhysicalParams unscale(const ScaledParams& s);

}  // namespace bzo

#endif
