#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "qmm/modes.hpp"

namespace qmm {

using Complex = std::complex<double>;

// Probe energy split into a reference and a small offset. Ultra-narrow
// resonances (FWHM down to 1e-12 g and far below) are only resolvable when the
// offset from the resonance center is carried as its own double; per-mode
// denominators are evaluated as (ref - Omega_n) + offset, never as
// (ref + offset) - Omega_n.
struct ProbeEnergy {
    double ref = 0.0;    // reduced energy (offset from omega_c in units of g)
    double offset = 0.0; // small offset from ref

    double value() const { return ref + offset; }
};

struct GammaBeta {
    Complex gamma_left;
    Complex gamma_right;
    Complex beta;
};

struct ScatteringResult {
    ProbeEnergy probe;
    Complex gamma_left, gamma_right, beta; // raw mode sums (diverge at poles)
    Complex t, r;
    double wavenumber = 0.0;  // k = eps_abs / v_g
    double half_length = 0.0; // L, global phase only; zero by convention

    double transmission() const { return std::norm(t); }
    double reflection() const { return std::norm(r); }
};

// Raw mode sums over the edge couplings: Gamma_{l,r} = 1 + (i/2 v_g) sum_n
// |V_n^{l,r}|^2/(eps - Omega_n), beta analogous. Throws PoleProximityError when
// the probe is within the pole-regularization threshold of an eigenvalue;
// scatter() covers that region.
GammaBeta gamma_beta(const ModeBasis& basis, const Ports& ports, ProbeEnergy eps);

// Exact one-photon transmission/reflection amplitudes. Total function of the
// probe energy: near an eigenvalue the pole is cleared analytically from the
// rational form, so t and r stay finite and continuous through it.
ScatteringResult scatter(const ModeBasis& basis, const Ports& ports, ProbeEnergy eps);

struct ModeExcitations {
    Eigen::VectorXcd amplitudes;    // p_k^n, length N+1
    Eigen::VectorXd site_occupation; // n^j = |sum_n p_k^n u_n^j|^2, j = 1..N
    double qubit_occupation = 0.0;
};

// Mode excitation amplitudes and intra-array photon occupation for the LS
// state behind `result` (must come from scatter() at the same probe).
ModeExcitations mode_excitations(const ModeBasis& basis, const Ports& ports,
                                 const ScatteringResult& result);

enum class Side { Left, Right };

// LS wavefunction on a waveguide branch coordinate. theta(0) := 1.
Complex evaluate_waveguide_amplitude(const ScatteringResult& result, Side side, double x);

struct SpectrumRow {
    double energy;  // reduced probe energy
    double T;
    double R;
    double phase_t; // arg t
};

std::vector<SpectrumRow> transmission_spectrum(const ModeBasis& basis, const Ports& ports,
                                               const std::vector<double>& grid);

// Pole-regularization threshold: |eps - Omega_m| < pole_threshold (reduced)
// switches scatter() to the cleared rational form.
inline constexpr double pole_threshold = 1e-6;

} // namespace qmm
