#ifndef BZO_CAVITY_HPP
#define BZO_CAVITY_HPP

#include <complex>

namespace bzo {

// Driven, damped cavity field coupled dispersively to N atoms with coupling
// g^2 = g0^2 * O. All rates must be in one consistent unit system (the
// dynamics passes recoil-scaled rates); alpha is dimensionless with
// |alpha|^2 the photon number.

// Steady state alpha = (eta/kappa) / (1 + i N g^2/(kappa delta)).
std::complex<double> steady_alpha(double eta, double kappa, double n_atoms,
                                  double g2, double delta);

// Exact propagator over dt with g^2 frozen: the field ODE
//   d(alpha)/dt = -lambda alpha + eta,   lambda = kappa + i N g^2/delta
// is linear, so alpha(t+dt) = a_ss + (alpha - a_ss) exp(-lambda dt) with
// a_ss = eta/lambda. Unconditionally stable for kappa > 0.
std::complex<double> cavity_substep(std::complex<double> alpha, double eta,
                                    double kappa, double n_atoms, double g2_frozen,
                                    double delta, double dt);

// Lattice depth from the field: s = g0^2 |alpha|^2 / delta with g0, delta in
// recoil-scaled rates, giving s in E_R. Sign follows sign(delta).
double depth_from_alpha(std::complex<double> alpha, double g0_scaled, double delta_scaled);

}  // namespace bzo

#endif
