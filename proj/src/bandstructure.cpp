#include "bzo/bandstructure.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace bzo {

BlochSolution solve_bloch(double q, double s, int basis_halfwidth) {
    if (s < 0.0)
        throw std::invalid_argument("solve_bloch: s must be >= 0 (sign belongs in the potential prefactor)");
    if (basis_halfwidth < 4)
        throw std::invalid_argument("solve_bloch: basis_halfwidth must be >= 4");
    if (!std::isfinite(q) || !std::isfinite(s))
        throw std::invalid_argument("solve_bloch: non-finite input");

    const int M = basis_halfwidth;
    const int L = 2 * M + 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(L, L);
    for (int i = 0; i < L; ++i) {
        const double kn = 2.0 * (i - M) + q;
        H(i, i) = kn * kn + 0.5 * s;
        if (i + 1 < L) H(i, i + 1) = H(i + 1, i) = 0.25 * s;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("solve_bloch: eigensolver failed to converge");

    BlochSolution sol;
    sol.q = q;
    sol.s = s;
    sol.basis_halfwidth = M;
    sol.energies = es.eigenvalues();
    sol.coeffs = es.eigenvectors();
    // phase convention: largest-|c| coefficient positive
    for (int b = 0; b < L; ++b) {
        int imax = 0;
        sol.coeffs.col(b).cwiseAbs().maxCoeff(&imax);
        if (sol.coeffs(imax, b) < 0.0) sol.coeffs.col(b) *= -1.0;
    }
    sol.overlap0 = coupling_overlap(sol, 0);
    return sol;
}

double coupling_overlap(const Eigen::Ref<const Eigen::VectorXcd>& coeffs) {
    const auto n = coeffs.size();
    const std::complex<double> shifted =
        coeffs.head(n - 1).dot(coeffs.tail(n - 1));  // sum conj(c_n) c_{n+1}
    return 0.5 + 0.5 * shifted.real();
}

double coupling_overlap(const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
    const auto n = coeffs.size();
    return 0.5 + 0.5 * coeffs.head(n - 1).dot(coeffs.tail(n - 1));
}

double coupling_overlap(const BlochSolution& sol, int band) {
    if (band < 0 || band >= sol.coeffs.cols())
        throw std::invalid_argument("coupling_overlap: band index out of range");
    return coupling_overlap(Eigen::Ref<const Eigen::VectorXd>(sol.coeffs.col(band)));
}

Eigen::VectorXd band_populations(const Eigen::Ref<const Eigen::VectorXcd>& state,
                                 double q, double s, int basis_halfwidth) {
    const int L = 2 * basis_halfwidth + 1;
    if (state.size() != L)
        throw std::invalid_argument("band_populations: state size does not match basis");
    const BlochSolution sol = solve_bloch(q, s, basis_halfwidth);
    Eigen::VectorXd w(L);
    for (int b = 0; b < L; ++b) {
        const std::complex<double> amp = sol.coeffs.col(b).cast<std::complex<double>>().dot(state);
        w(b) = std::norm(amp);
    }
    return w;
}

}  // namespace bzo
