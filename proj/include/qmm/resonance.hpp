#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qmm/analytics.hpp"
#include "qmm/array.hpp"

namespace qmm {

struct ResonancePeak {
    double seed = 0.0;          // reduced energy the search was anchored at
    double center_offset = 0.0; // located maximum, relative to seed
    double center = 0.0;        // seed + center_offset (display value)
    double fwhm = 0.0;          // half-max crossing separation, > 0
    double height = 0.0;        // T at center
    double fit_residual = 0.0;  // RMS of (data - Lorentzian) over the fit window
    double fit_width = 0.0;     // Lorentzian HWHM from the least-squares fit
    long n_evaluations = 0;
};

// T as a function of the offset from the search seed. The offset is the
// probe representation: callers evaluating near a mode at `seed` must feed
// the offset into ProbeEnergy::offset untouched.
using SpectrumFn = std::function<double(double)>;

// Golden-section ascent from the seed, half-max bisection for the FWHM, then
// a Lorentzian least-squares fit over +-5 fwhm for the residual. Throws
// PeakNotFoundError if no local maximum lies within 100 width_guess of the
// seed, TruncatedPeakError if a half-max crossing cannot be bracketed.
ResonancePeak refine_peak(const SpectrumFn& transmission, double seed, double width_guess);

struct QuasiBoundSurvey {
    ResonancePeak b_minus;
    ResonancePeak b_plus;
    double energy_minus_numeric = 0.0; // exact out-of-band eigenvalues (reduced)
    double energy_plus_numeric = 0.0;
    // measured center minus the numeric bound-state energy, per branch;
    // compare with LinewidthPrediction::shift
    double shift_minus = 0.0;
    double shift_plus = 0.0;
};

// Locates both ultra-narrow quasi-bound resonances. Peaks are anchored at the
// numerically exact out-of-band eigenvalues (the closed-form energies select
// them but are too coarse to anchor a search whose target is 1e-12 g wide);
// width guesses come from the linewidth asymptotics.
QuasiBoundSurvey quasi_bound_survey(const ArraySpec& spec, const Ports& ports);

struct LinewidthRow {
    double j_over_g = 0.0;
    bool ok = false;
    std::string error;
    double fwhm_minus = 0.0, fwhm_plus = 0.0;
    double center_minus = 0.0, center_plus = 0.0;
    double shift_minus = 0.0, shift_plus = 0.0;
    double w_weak = 0.0, w_strong = 0.0; // predictions at this J
};

// One quasi_bound_survey per J/g value; per-row failures are recorded and the
// sweep continues.
std::vector<LinewidthRow> linewidth_sweep(const ArraySpec& spec_template, const Ports& ports,
                                          const std::vector<double>& j_over_g);

} // namespace qmm
