#pragma once

#include <Eigen/Core>

#include "qmm/array.hpp"

namespace qmm {

// Single-excitation eigenbasis of the array + qubit. Energies are ascending,
// reduced (offset from omega_c in units of g). Row n of photon_amps holds the
// photon amplitudes u_n^j = <vac|a_j|n>, j = 1..N.
struct ModeBasis {
    Eigen::VectorXd energies;    // N+1 eigenvalues
    Eigen::MatrixXd photon_amps; // (N+1) x N
    Eigen::VectorXd qubit_amps;  // N+1 qubit weights
    double unit = 1.0;           // g, the absolute energy behind one reduced unit
    double origin = 0.0;         // omega_c, absolute

    int n_modes() const { return static_cast<int>(energies.size()); }
    int n_sites() const { return static_cast<int>(photon_amps.cols()); }

    double edge_amp_left(int n) const { return photon_amps(n, 0); }
    double edge_amp_right(int n) const { return photon_amps(n, n_sites() - 1); }

    // V_n^{l,r} = V_{l,r} u_n^{1,N}
    double edge_coupling_left(const Ports& p, int n) const { return p.v_left * edge_amp_left(n); }
    double edge_coupling_right(const Ports& p, int n) const { return p.v_right * edge_amp_right(n); }
};

// Dense single-excitation Hamiltonian in reduced units. Basis ordering is
// (cavity 1 ... cavity N, qubit).
Eigen::MatrixXd build_hamiltonian(const ArraySpec& spec);

// Dense symmetric eigendecomposition. Throws ValidationError if H is not
// symmetric within 1e-14 relative, NumericalError if the solver fails.
ModeBasis diagonalize(const Eigen::MatrixXd& hamiltonian);

// build + diagonalize + evanescent-tail refinement. The dense solver only
// resolves eigenvector components down to ~1e-15 absolute; out-of-band modes
// have edge amplitudes as small as eta^(N-1)/2 (1e-50 at N=101, J/g=0.1), so
// their tails are recomputed from the stable inward chain recursion anchored
// at the largest dense component.
ModeBasis solve_modes(const ArraySpec& spec);

// Exposed for testing: refine tails of an existing basis in place.
void refine_evanescent_tails(ModeBasis& basis, const ArraySpec& spec);

} // namespace qmm
