#pragma once

#include <Eigen/Core>

#include "qmm/errors.hpp"

namespace qmm {

// A 1D coupled-cavity array with a single two-level emitter in the central
// cavity. Absolute frequencies (omega_c, omega_q, hop_j, coupling_g) share one
// unit; all internal numerics run in detuning-from-omega_c units of g, so the
// absolute values only matter for I/O.
struct ArraySpec {
    int n_cavities = 1;      // N, odd
    double omega_c = 0.0;    // cavity frequency
    double hop_j = 0.0;      // J >= 0, nearest-neighbour hopping
    int qubit_site = 1;      // s = (N+1)/2, 1-based
    double coupling_g = 1.0; // g > 0
    double omega_q = 0.0;    // qubit frequency, usually omega_c

    // reduced quantities used by the numerics
    double hop() const { return hop_j / coupling_g; }                          // J/g
    double qubit_detuning() const { return (omega_q - omega_c) / coupling_g; } // (wq-wc)/g
};

// Spec with omega_c = 0, g = 1 (all energies are then offsets from omega_c in
// units of g). The constructor form used nearly everywhere in tests and sweeps.
ArraySpec reduced_spec(int n_cavities, double j_over_g, double qubit_detuning_over_g = 0.0);

// Returns the spec unchanged iff all invariants hold, throws ValidationError
// otherwise (even N, off-center qubit, g <= 0, J < 0).
ArraySpec validate_spec(const ArraySpec& spec);

// Two semi-infinite waveguides attached to the edge cavities. kappa = V^2/v_g
// is the photon escape rate of an edge cavity into its waveguide.
struct Ports {
    double v_left = 0.0;
    double v_right = 0.0;
    double group_velocity = 1.0; // v_g > 0

    double kappa_left() const { return v_left * v_left / group_velocity; }
    double kappa_right() const { return v_right * v_right / group_velocity; }
};

// Ports with v_g = 1 and V chosen so that kappa/g takes the given values
// (couplings in units of g, to be paired with a reduced_spec()).
Ports symmetric_ports(double kappa_over_g);
Ports ports_from_kappas(double kappa_l_over_g, double kappa_r_over_g);

Ports validate_ports(const Ports& ports);

// Eigenmodes of the bare array (no qubit): cosine band plus the standing-wave
// amplitudes at the qubit site. Energies in reduced units.
struct BareBand {
    Eigen::VectorXd energies;  // w_p = -2J cos(pi p/(N+1)), p = 1..N
    Eigen::VectorXd site_amps; // alpha_p^s = sqrt(2/(N+1)) sin(pi p s/(N+1))

    double bandwidth() const { return energies(energies.size() - 1) - energies(0); }
};

BareBand bare_band(const ArraySpec& spec);

} // namespace qmm
