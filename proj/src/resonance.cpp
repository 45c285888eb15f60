#include "qmm/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "qmm/modes.hpp"
#include "qmm/scattering.hpp"

namespace qmm {

namespace {

struct CountingFn {
    const SpectrumFn& fn;
    long* count;
    double operator()(double delta) const {
        ++(*count);
        return fn(delta);
    }
};

// Golden-section maximization on [a, b]; assumes a single interior maximum.
double golden_max(const CountingFn& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Bisect the half-max crossing on [inside, outside] with T(inside) > target
// and T(outside) < target.
double bisect_crossing(const CountingFn& f, double inside, double outside, double target) {
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        if (f(mid) > target) inside = mid;
        else outside = mid;
    }
    return 0.5 * (inside + outside);
}

struct LorentzFit {
    double center, hwhm, height, rms;
};

// Linear least squares on 1/T = a d^2 + b d + c, then one Gauss-Newton polish
// on (center, width, height) against T itself.
LorentzFit fit_lorentzian(const CountingFn& f, double center, double fwhm) {
    constexpr int n_samples = 201;
    const double half_window = 5.0 * fwhm;
    Eigen::VectorXd ds(n_samples), ts(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double d = center - half_window + 2.0 * half_window * i / (n_samples - 1);
        ds(i) = d;
        ts(i) = std::max(f(d), std::numeric_limits<double>::min());
    }
    // scale the abscissa by the fwhm so the normal equations stay conditioned
    Eigen::MatrixXd m(n_samples, 3);
    Eigen::VectorXd y(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double x = (ds(i) - center) / fwhm;
        m(i, 0) = x * x;
        m(i, 1) = x;
        m(i, 2) = 1.0;
        y(i) = 1.0 / ts(i);
    }
    Eigen::Vector3d p = m.colPivHouseholderQr().solve(y);
    double a = p(0), b = p(1), c0 = p(2);
    if (a <= 0.0) a = 1.0; // degenerate data; the polish step will refine
    double xc = -b / (2.0 * a);
    double w2 = std::max(c0 / a - xc * xc, 1e-30);
    double fc = center + xc * fwhm;
    double fw = std::sqrt(w2) * fwhm;
    double fh = 1.0 / (a * w2);

    // Gauss-Newton on r_i = h w^2/((d-c)^2+w^2) - T_i, to convergence
    Eigen::MatrixXd jac(n_samples, 3);
    Eigen::VectorXd res(n_samples);
    for (int it = 0; it < 30; ++it) {
        for (int i = 0; i < n_samples; ++i) {
            const double u = ds(i) - fc;
            const double den = u * u + fw * fw;
            const double model = fh * fw * fw / den;
            res(i) = model - ts(i);
            jac(i, 0) = 2.0 * fh * fw * fw * u / (den * den);      // d/dc
            jac(i, 1) = 2.0 * fh * fw * u * u / (den * den);       // d/dw
            jac(i, 2) = fw * fw / den;                             // d/dh
        }
        const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-res);
        const double nc = fc + step(0), nw = fw + step(1), nh = fh + step(2);
        if (!std::isfinite(nc) || !std::isfinite(nw) || nw <= 0.0 || !std::isfinite(nh)) break;
        const double rel = std::abs(step(0)) / fw + std::abs(step(1)) / fw + std::abs(step(2));
        fc = nc; fw = nw; fh = nh;
        if (rel < 1e-12) break;
    }

    double ss = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double u = ds(i) - fc;
        const double model = fh * fw * fw / (u * u + fw * fw);
        ss += (model - ts(i)) * (model - ts(i));
    }
    return LorentzFit{fc, fw, fh, std::sqrt(ss / n_samples)};
}

} // namespace

ResonancePeak refine_peak(const SpectrumFn& transmission, double seed, double width_guess) {
    if (!(width_guess > 0.0) || !std::isfinite(width_guess))
        throw ValidationError("width_guess must be positive and finite");
    long evals = 0;
    const CountingFn f{transmission, &evals};
    const double w = width_guess;

    // coarse scan of +-100 width_guess at quarter-guess resolution
    constexpr int half_span = 400;
    double best_d = 0.0, best_t = -1.0, min_t = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = -half_span; i <= half_span; ++i) {
        const double d = i * (w / 4.0);
        const double t = f(d);
        if (t > best_t) { best_t = t; best_d = d; best_i = i; }
        min_t = std::min(min_t, t);
    }
    if (!(best_t > 0.0) || best_t - min_t <= 1e-9 * std::max(best_t, 1e-300))
        throw PeakNotFoundError("peak not found: spectrum flat within 100 width_guess of seed");
    if (best_i == -half_span || best_i == half_span)
        throw PeakNotFoundError("peak not found: maximum at scan boundary");

    const double dc = golden_max(f, best_d - w / 4.0, best_d + w / 4.0,
                                 std::max(1e-10 * w, 4.0 * 1.1e-16 * std::abs(best_d)));
    const double height = f(dc);
    const double target = 0.5 * height;

    // expand outward from the maximum to bracket each half-max crossing
    const auto crossing = [&](double dir) {
        double step = w / 2.0;
        double inside = dc;
        double outside = dc + dir * step;
        while (f(outside) > target) {
            inside = outside;
            step *= 2.0;
            if (step > 4096.0 * w)
                throw TruncatedPeakError("truncated peak: half-max not bracketed");
            outside = dc + dir * step;
        }
        return bisect_crossing(f, inside, outside, target);
    };
    const double right = crossing(+1.0);
    const double left = crossing(-1.0);

    ResonancePeak peak;
    peak.seed = seed;
    peak.center_offset = dc;
    peak.center = seed + dc;
    peak.fwhm = right - left;
    peak.height = height;
    const LorentzFit fit = fit_lorentzian(f, dc, peak.fwhm);
    peak.fit_residual = fit.rms;
    peak.fit_width = fit.hwhm;
    peak.n_evaluations = evals;
    return peak;
}

QuasiBoundSurvey quasi_bound_survey(const ArraySpec& spec, const Ports& ports) {
    validate_spec(spec);
    validate_ports(ports);
    if (!(spec.hop() > 0.0)) throw ValidationError("quasi-bound survey requires J > 0");

    const ModeBasis basis = solve_modes(spec);
    QuasiBoundSurvey out;
    out.energy_minus_numeric = basis.energies(0);
    out.energy_plus_numeric = basis.energies(basis.n_modes() - 1);

    const auto survey_branch = [&](Branch branch, double anchor) {
        const LinewidthPrediction pred = lorentzian_prediction(spec, ports, branch);
        const SpectrumFn fn = [&basis, &ports, anchor](double delta) {
            return scatter(basis, ports, ProbeEnergy{anchor, delta}).transmission();
        };
        return refine_peak(fn, anchor, pred.seed_width());
    };
    out.b_minus = survey_branch(Branch::BMinus, out.energy_minus_numeric);
    out.b_plus = survey_branch(Branch::BPlus, out.energy_plus_numeric);
    out.shift_minus = out.b_minus.center_offset;
    out.shift_plus = out.b_plus.center_offset;
    return out;
}

std::vector<LinewidthRow> linewidth_sweep(const ArraySpec& spec_template, const Ports& ports,
                                          const std::vector<double>& j_over_g) {
    std::vector<LinewidthRow> rows;
    rows.reserve(j_over_g.size());
    for (double j : j_over_g) {
        LinewidthRow row;
        row.j_over_g = j;
        try {
            ArraySpec spec = spec_template;
            spec.hop_j = j * spec.coupling_g;
            validate_spec(spec);
            const QuasiBoundSurvey s = quasi_bound_survey(spec, ports);
            const LinewidthPrediction pred = lorentzian_prediction(spec, ports, Branch::BMinus);
            row.ok = true;
            row.fwhm_minus = s.b_minus.fwhm;
            row.fwhm_plus = s.b_plus.fwhm;
            row.center_minus = s.b_minus.center;
            row.center_plus = s.b_plus.center;
            row.shift_minus = s.shift_minus;
            row.shift_plus = s.shift_plus;
            row.w_weak = pred.w_weak;
            row.w_strong = pred.w_strong;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace qmm
