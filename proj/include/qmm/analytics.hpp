#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "qmm/array.hpp"

namespace qmm {

// Closed-form out-of-band (quasi-)bound states. Reduced units throughout:
// energies are offsets from omega_c in units of g.
struct BoundStateApprox {
    double energy_minus = 0.0; // Omega_{B-} - omega_c = -sqrt(2J^2 + W2)
    double energy_plus = 0.0;
    double omega_aux_sq = 0.0; // W2 = sqrt(4J^4 + g^4)
    double eta = 0.0;          // per-site decay factor, 0 < eta < 1
    double xi = 0.0;           // localization length, -1/ln(eta)
    double alpha = 0.0;        // photon weight sqrt(2J^2 + W2)
    double f = 0.0;            // (1 + eta^2 - 2 eta^(N+1)) / (1 - eta^2)
    double norm = 0.0;         // sqrt(f alpha^2 + g^2)
    int n_cavities = 0;

    // wavefunction amplitudes, j = 1..N (branch-independent photon part)
    double photon_amplitude(int j) const;
    double qubit_amplitude_plus() const { return 1.0 / norm; }   // +g/norm, g=1
    double qubit_amplitude_minus() const { return -1.0 / norm; }
    Eigen::VectorXd photon_amplitudes() const;
};

BoundStateApprox bound_state_closed_form(const ArraySpec& spec);

enum class Branch { BMinus, BPlus };

// Linewidth/lifetime predictions for one quasi-bound branch, plus the
// Lorentzian transmission profile in the offset variable.
struct LinewidthPrediction {
    Branch branch = Branch::BMinus;
    double w_weak = 0.0;    // (kappa/2)(J/g)^(N-1), valid J < g
    double w_strong = 0.0;  // [2 kappa/(N+1)] sin^2(pi/(N+1)), valid J > g
    bool weak_valid = false;
    double tau_weak = 0.0;  // 1/w_weak
    double tau_strong = 0.0;
    double shift = 0.0;     // peak center minus bound-state energy: +(k/2g)W for
                            // B-, -(k/2g)W for B+ (fixed against full numerics)

    // regime-aware width estimate used to seed peak searches: the smaller
    // asymptote away from the crossover, their geometric mean near it
    double seed_width() const;

    // predicted T(delta), delta measured from the bound-state energy
    std::function<double(double)> profile() const;
};

LinewidthPrediction lorentzian_prediction(const ArraySpec& spec, const Ports& ports, Branch branch);

// All N+1 eigenvalues from the secular equation: roots of
//   Omega - wq - g^2 sum_{p odd} |alpha_p^s|^2/(Omega - w_p) = 0
// (monotone between consecutive odd-p poles; bracketing is exact) together
// with the dark modes {w_p : p even}. Matches dense diagonalization.
std::vector<double> characteristic_roots(const ArraySpec& spec);

// Odd-p bare-band energies: the poles of the secular function above.
std::vector<double> secular_poles(const ArraySpec& spec);

// Splitting 2g sqrt(2/(N+1)) of the two near-center states, defined for even
// M = (N-1)/2 only; odd M has a degenerate doublet at omega_c instead.
double inband_splitting(const ArraySpec& spec);

} // namespace qmm
