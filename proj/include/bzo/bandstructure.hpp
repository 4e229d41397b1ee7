#ifndef BZO_BANDSTRUCTURE_HPP
#define BZO_BANDSTRUCTURE_HPP

#include <Eigen/Core>

namespace bzo {

// Bloch eigenproblem for the potential s*cos^2(z) (z in units of 1/k_c,
// energies in E_R) expanded on plane waves exp(i*2n*z), n in [-M, M]:
//
//   H(n,n)   = (2n+q)^2 + s/2
//   H(n,n+1) = H(n+1,n) = s/4
//
// q is the quasimomentum in k_c units; the first Brillouin zone is [-1, 1].
// The solver always takes s >= 0; a red-detuned (attractive at antinodes)
// lattice maps onto this problem by the quarter-period shift z -> z + pi/2,
// which in this basis is the diagonal unitary (-1)^n (see dynamics).
struct BlochSolution {
    double q = 0.0;
    double s = 0.0;
    int basis_halfwidth = 0;    // M
    Eigen::VectorXd energies;   // 2M+1 values, ascending
    Eigen::MatrixXd coeffs;     // column b = plane-wave amplitudes of band b
    double overlap0 = 0.0;      // lowest-band coupling overlap O(q,s)
};

// Diagonalizes the Bloch Hamiltonian. Eigenvectors are real (H is real
// symmetric); the phase convention makes the largest-magnitude coefficient
// of each band positive. Throws on s < 0, M < 4, or eigensolver failure.
BlochSolution solve_bloch(double q, double s, int basis_halfwidth = 16);

// Coupling overlap O = integral over one cell of |U|^2 cos^2(z), for a
// cell-normalized state: O = 1/2 + Re(sum_n conj(c_n) c_{n+1})/2, in [0,1].
// Independent of the global phase.
double coupling_overlap(const Eigen::Ref<const Eigen::VectorXcd>& coeffs);
double coupling_overlap(const Eigen::Ref<const Eigen::VectorXd>& coeffs);
double coupling_overlap(const BlochSolution& sol, int band);

// Projects a state in the same plane-wave basis onto the instantaneous
// Bloch bands at (q, s). Weights are >= 0 and sum to the state norm.
// Throws on basis-size mismatch.
Eigen::VectorXd band_populations(const Eigen::Ref<const Eigen::VectorXcd>& state,
                                 double q, double s, int basis_halfwidth);

}  // namespace bzo

#endif
