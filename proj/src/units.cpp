#include "bzo/units.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bzo/constants.hpp"

namespace bzo {

using constants::hbar;
using constants::pi;
using constants::two_pi;

void PhysicalParams::validate() const {
    if (!(atom_mass > 0.0)) throw std::invalid_argument("atom_mass must be positive");
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    if (delta == 0.0) throw std::invalid_argument("delta must be nonzero (dispersive model divides by it)");
    if (n_atoms < 0.0) throw std::invalid_argument("n_atoms must be >= 0");
    if (detector_efficiency < 0.0 || detector_efficiency > 1.0)
        throw std::invalid_argument("detector_efficiency must lie in [0,1]");
    if (!std::isfinite(g0) || !std::isfinite(eta) || !std::isfinite(force) ||
        !std::isfinite(delta) || !std::isfinite(atom_mass))
        throw std::invalid_argument("parameters must be finite");
}

std::vector<std::string> PhysicalParams::validity_warnings() const {
    std::vector<std::string> out;
    if (std::abs(delta) < 100.0 * gamma) {
        std::ostringstream os;
        os << "dispersive regime marginal: |delta| = " << std::abs(delta) / gamma
           << " gamma (< 100 gamma)";
        out.push_back(os.str());
    }
    const double sat = kappa * std::abs(delta) / g0;
    if (g0 > 0.0 && eta * eta > 0.01 * sat * sat) {
        std::ostringstream os;
        os << "low-saturation condition marginal: eta^2/(kappa delta/g0)^2 = "
           << eta * eta / (sat * sat) << " (> 0.01)";
        out.push_back(os.str());
    }
    return out;
}

PhysicalParams preset(const std::string& name) {
    PhysicalParams p;
    if (name == "Rb87") {
        p.atom_mass = 86.909180531 * constants::atomic_mass_unit;
        p.wavelength = 780e-9;
        p.gamma = two_pi * 3.0333e6;  // D2 half-linewidth
    } else if (name == "Cs133") {
        p.atom_mass = 132.905451961 * constants::atomic_mass_unit;
        p.wavelength = 852e-9;
        p.gamma = two_pi * 2.6166e6;
    } else {
        throw std::invalid_argument("unknown species preset '" + name + "'");
    }
    return p;
}

std::vector<std::string> preset_names() { return {"Rb87", "Cs133"}; }

ScaledParams scale(const PhysicalParams& p) {
    p.validate();
    ScaledParams s;
    s.k_c = two_pi / p.wavelength;
    s.recoil_energy = hbar * hbar * s.k_c * s.k_c / (2.0 * p.atom_mass);
    s.time_unit = hbar / s.recoil_energy;

    s.g0 = p.g0 * s.time_unit;
    s.kappa = p.kappa * s.time_unit;
    s.gamma = p.gamma * s.time_unit;
    s.delta = p.delta * s.time_unit;
    s.eta = p.eta * s.time_unit;
    s.n_atoms = p.n_atoms;
    s.detector_efficiency = p.detector_efficiency;
    s.f_tilde = p.force / (s.k_c * s.recoil_energy);

    // omega_B = F d/hbar with lattice period d = pi/k_c
    s.omega_B = std::abs(p.force) * (pi / s.k_c) / hbar;
    s.omega_B_scaled = pi * std::abs(s.f_tilde);
    s.tau_B_scaled = s.f_tilde != 0.0 ? 2.0 / std::abs(s.f_tilde)
                                      : std::numeric_limits<double>::infinity();
    s.cooperativity = p.g0 * p.g0 / (2.0 * p.kappa * p.gamma);
    s.x = p.n_atoms * p.g0 * p.g0 / (p.kappa * p.delta);
    s.photon_flux = p.eta * p.eta / p.kappa;
    // hbar I g0^2/(delta kappa) in recoil units; carries the sign of delta
    s.s_max = (s.eta * s.eta / s.kappa) * s.g0 * s.g0 / (s.delta * s.kappa);
    s.omega_ho = 2.0 * std::sqrt(std::abs(s.s_max)) / s.time_unit;
    return s;
}

PhysicalParams unscale(const ScaledParams& s) {
    PhysicalParams p;
    p.wavelength = two_pi / s.k_c;
    p.atom_mass = hbar * hbar * s.k_c * s.k_c / (2.0 * s.recoil_energy);
    p.g0 = s.g0 / s.time_unit;
    p.kappa = s.kappa / s.time_unit;
    p.gamma = s.gamma / s.time_unit;
    p.delta = s.delta / s.time_unit;
    p.eta = s.eta / s.time_unit;
    p.n_atoms = s.n_atoms;
    p.force = s.f_tilde * s.k_c * s.recoil_energy;
    p.detector_efficiency = s.detector_efficiency;
    return p;
}

}  // namespace bzo
