#include "bzo/cavity.hpp"

#include <stdexcept>

namespace bzo {

std::complex<double> steady_alpha(double eta, double kappa, double n_atoms,
                                  double g2, double delta) {
    if (!(kappa > 0.0)) throw std::invalid_argument("steady_alpha: kappa must be positive");
    if (delta == 0.0) throw std::invalid_argument("steady_alpha: delta must be nonzero");
    return eta / std::complex<double>(kappa, n_atoms * g2 / delta);
}

std::complex<double> cavity_substep(std::complex<double> alpha, double eta,
                                    double kappa, double n_atoms, double g2_frozen,
                                    double delta, double dt) {
    const std::complex<double> lambda(kappa, n_atoms * g2_frozen / delta);
    const std::complex<double> a_ss = eta / lambda;
    return a_ss + (alpha - a_ss) * std::exp(-lambda * dt);
}

double depth_from_alpha(std::complex<double> alpha, double g0_scaled, double delta_scaled) {
    if (delta_scaled == 0.0) throw std::invalid_argument("depth_from_alpha: delta must be nonzero");
    return g0_scaled * g0_scaled * std::norm(alpha) / delta_scaled;
}

}  // namespace bzo
