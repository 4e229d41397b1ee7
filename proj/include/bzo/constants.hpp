#ifndef BZO_CONSTANTS_HPP
#define BZO_CONSTANTS_HPP

#include <numbers>

namespace bzo::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// SI defining constants (2019 redefinition) and CODATA values
inline constexpr double planck = 6.62607015e-34;          // J s, exact
inline constexpr double hbar = planck / two_pi;           // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

}  // namespace bzo::constants

#endif
