#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "bzo/cavity.hpp"
#include "bzo/constants.hpp"
#include "bzo/units.hpp"
#include "test_helpers.hpp"

using namespace bzo;
using constants::pi;

TEST_CASE("steady state: empty cavity") {
    const auto a = steady_alpha(2.0, 0.5, 0.0, 1.0, 1.0);
    CHECK(a.real() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(a.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("steady state: unit dispersive load") {
    // N g^2/(kappa delta) = 1: |alpha|^2 = (eta/kappa)^2/2, phase -45 deg
    const double eta = 3.0, kappa = 1.5;
    const auto a = steady_alpha(eta, kappa, 1.0, kappa * 2.0, 2.0);
    CHECK(std::norm(a) == doctest::Approx(eta * eta / (2.0 * kappa * kappa)).epsilon(1e-14));
    CHECK(std::arg(a) == doctest::Approx(-pi / 4.0).epsilon(1e-14));
}

TEST_CASE("steady state: fig2a seed with O = 1/2") {
    const ScaledParams p = scale(testing::fig2a_params());
    const double g2 = p.g0 * p.g0 * 0.5;
    const auto a = steady_alpha(p.eta, p.kappa, p.n_atoms, g2, p.delta);
    const double load = p.n_atoms * g2 / (p.kappa * p.delta);  // = x/2 = -0.196
    CHECK(std::abs(load) == doctest::Approx(0.196).epsilon(1e-6));
    const double expect = std::pow(p.eta / p.kappa, 2) / (1.0 + load * load);
    CHECK(std::norm(a) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("passive bound |alpha| <= eta/kappa") {
    const ScaledParams p = scale(testing::fig2a_params());
    for (const double O : {0.0, 0.3, 0.5, 0.9}) {
        const auto a = steady_alpha(p.eta, p.kappa, p.n_atoms, p.g0 * p.g0 * O, p.delta);
        CHECK(std::abs(a) <= p.eta / p.kappa + 1e-12);
    }
}

TEST_CASE("substep holds the fixed point") {
    const double eta = 2.0, kappa = 0.7, N = 100.0, g2 = 0.01, delta = 5.0;
    const auto ss = steady_alpha(eta, kappa, N, g2, delta);
    const auto stepped = cavity_substep(ss, eta, kappa, N, g2, delta, 0.37);
    CHECK(std::abs(stepped - ss) < 1e-14 * std::abs(ss));
}

TEST_CASE("substep relaxes to the steady state for long dt") {
    const double eta = 2.0, kappa = 0.7, N = 100.0, g2 = 0.01, delta = 5.0;
    const auto ss = steady_alpha(eta, kappa, N, g2, delta);
    const auto a = cavity_substep({10.0, -3.0}, eta, kappa, N, g2, delta, 200.0 / kappa);
    CHECK(std::abs(a - ss) < 1e-12 * std::abs(ss));
}

TEST_CASE("exact propagator semigroup property") {
    const double eta = 1.3, kappa = 0.9, N = 5e4, g2 = 3e-5, delta = 40.0;
    const std::complex<double> a0{0.4, 0.8};
    for (const double dt : {0.01, 0.5, 3.0}) {
        const auto one = cavity_substep(a0, eta, kappa, N, g2, delta, dt);
        const auto half = cavity_substep(a0, eta, kappa, N, g2, delta, dt / 2);
        const auto two = cavity_substep(half, eta, kappa, N, g2, delta, dt / 2);
        CHECK(std::abs(one - two) < 1e-12 * std::abs(one));
    }
}

TEST_CASE("slow modulation tracks the steady state to first order in rate/kappa") {
    const ScaledParams p = scale(testing::fig2a_params());
    const double omega = p.kappa / 500.0;  // slow drive
    const double dt = 0.02 / p.kappa;
    auto g2_of = [&](double t) {
        return p.g0 * p.g0 * (0.66 + 0.05 * std::sin(omega * t));
    };
    std::complex<double> a = steady_alpha(p.eta, p.kappa, p.n_atoms, g2_of(0.0), p.delta);
    double worst = 0.0;
    const double t_end = 3.0 * constants::two_pi / omega;
    for (double t = 0.0; t < t_end; t += dt) {
        // freeze g^2 at the step midpoint
        a = cavity_substep(a, p.eta, p.kappa, p.n_atoms, g2_of(t + 0.5 * dt), p.delta, dt);
        const auto target = steady_alpha(p.eta, p.kappa, p.n_atoms, g2_of(t + dt), p.delta);
        worst = std::max(worst, std::abs(a - target) / std::abs(target));
    }
    CHECK(worst < 2.0 * omega / p.kappa);
}

TEST_CASE("depth from the field") {
    const ScaledParams p = scale(testing::fig2a_params());
    CHECK(depth_from_alpha({0.0, 0.0}, p.g0, p.delta) == 0.0);

    // |alpha|^2 = 1443.87 photons puts |s| at 3 E_R for the fig2a chain
    const double nphot = 1443.867;
    const std::complex<double> a{std::sqrt(nphot), 0.0};
    CHECK(std::abs(depth_from_alpha(a, p.g0, p.delta)) == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(depth_from_alpha(a, p.g0, p.delta) < 0.0);  // red detuning: attractive

    // linearity in the photon number
    const std::complex<double> a2 = a * std::sqrt(2.0);
    CHECK(depth_from_alpha(a2, p.g0, p.delta) ==
          doctest::Approx(2.0 * depth_from_alpha(a, p.g0, p.delta)).epsilon(1e-14));
}

TEST_CASE("photon current is proportional to the depth") {
    const ScaledParams p = scale(testing::fig2a_params());
    const PhysicalParams si = testing::fig2a_params();
    for (const double nphot : {100.0, 500.0, 1443.867}) {
        const std::complex<double> a{std::sqrt(nphot), 0.0};
        const double s = depth_from_alpha(a, p.g0, p.delta);
        const double rate = nphot * si.kappa;
        // R = s * (delta kappa)/(hbar g0^2) with everything in SI
        const double expect = s * p.recoil_energy * si.delta * si.kappa /
                              (constants::hbar * si.g0 * si.g0);
        CHECK(rate == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("delta = 0 rejected") {
    CHECK_THROWS_AS(steady_alpha(1.0, 1.0, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(depth_from_alpha({1.0, 0.0}, 1.0, 0.0), std::invalid_argument);
}
