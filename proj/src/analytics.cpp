#include "qmm/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qmm {

double BoundStateApprox::photon_amplitude(int j) const {
    const int s = (n_cavities + 1) / 2;
    return std::exp(-std::abs(j - s) / xi) * alpha / norm;
}

Eigen::VectorXd BoundStateApprox::photon_amplitudes() const {
    Eigen::VectorXd amps(n_cavities);
    for (int j = 1; j <= n_cavities; ++j) amps(j - 1) = photon_amplitude(j);
    return amps;
}

BoundStateApprox bound_state_closed_form(const ArraySpec& spec) {
    validate_spec(spec);
    const double j = spec.hop();
    if (!(j > 0.0)) throw ValidationError("bound-state closed form requires J > 0");
    const int n = spec.n_cavities;

    BoundStateApprox bs;
    bs.n_cavities = n;
    const double j2 = j * j;
    bs.omega_aux_sq = std::sqrt(4.0 * j2 * j2 + 1.0); // sqrt(4J^4 + g^4), g = 1
    bs.energy_plus = std::sqrt(2.0 * j2 + bs.omega_aux_sq);
    bs.energy_minus = -bs.energy_plus;
    // eta = sqrt((W2 - g^2)/(2J^2)); W2 - 1 = 4J^4/(W2 + 1) avoids cancellation
    bs.eta = j * std::sqrt(2.0 / (bs.omega_aux_sq + 1.0));
    bs.xi = -1.0 / std::log(bs.eta);
    bs.alpha = std::sqrt(2.0 * j2 + bs.omega_aux_sq);
    bs.f = (1.0 + bs.eta * bs.eta - 2.0 * std::pow(bs.eta, n + 1)) / (1.0 - bs.eta * bs.eta);
    bs.norm = std::sqrt(bs.f * bs.alpha * bs.alpha + 1.0);
    return bs;
}

double LinewidthPrediction::seed_width() const {
    if (w_weak <= 0.0) return w_strong;
    const double ratio = w_weak / w_strong;
    if (ratio < 0.1) return w_weak;
    if (ratio > 10.0) return w_strong;
    return std::sqrt(w_weak * w_strong);
}

std::function<double(double)> LinewidthPrediction::profile() const {
    const double w = w_weak;
    const double c = shift;
    return [w, c](double delta) {
        const double x = delta - c;
        return w * w / (x * x + w * w);
    };
}

LinewidthPrediction lorentzian_prediction(const ArraySpec& spec, const Ports& ports, Branch branch) {
    validate_spec(spec);
    validate_ports(ports);
    const double j = spec.hop();
    const int n = spec.n_cavities;
    const double g = spec.coupling_g;
    // the asymptotics assume one symmetric escape rate; geometric mean keeps
    // them usable for mildly asymmetric ports
    const double kappa = std::sqrt((ports.kappa_left() / g) * (ports.kappa_right() / g));

    LinewidthPrediction p;
    p.branch = branch;
    p.w_weak = 0.5 * kappa * std::pow(j, n - 1);
    const double sn = std::sin(std::numbers::pi / (n + 1));
    p.w_strong = 2.0 * kappa / (n + 1) * sn * sn;
    p.weak_valid = (j < 1.0);
    p.tau_weak = p.w_weak > 0.0 ? 1.0 / p.w_weak : 0.0;
    p.tau_strong = p.w_strong > 0.0 ? 1.0 / p.w_strong : 0.0;
    // dissipation-induced shift: toward the band center for both branches
    const double sign = (branch == Branch::BMinus) ? +1.0 : -1.0;
    p.shift = sign * 0.5 * kappa * p.w_weak;
    return p;
}

std::vector<double> secular_poles(const ArraySpec& spec) {
    const BareBand band = bare_band(spec);
    std::vector<double> poles;
    for (int p = 1; p <= spec.n_cavities; p += 2) poles.push_back(band.energies(p - 1));
    return poles; // ascending: w_p increases with p
}

namespace {

// Secular function F(x) = x - wq - sum_p c/(x - w_p) over the odd-p poles;
// strictly increasing between consecutive poles (F' = 1 + sum c/(x-w_p)^2).
struct Secular {
    const std::vector<double>& poles;
    double coeff; // 2/(N+1), times g^2 = 1
    double wq;

    double operator()(double x) const {
        double acc = 0.0, comp = 0.0;
        for (double p : poles) {
            const double term = coeff / (x - p);
            const double y = term - comp;
            const double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        return (x - wq) - acc;
    }
    // sum of absolute term magnitudes, for a backward-error residual scale
    double magnitude(double x) const {
        double m = std::abs(x) + std::abs(wq);
        for (double p : poles) m += std::abs(coeff / (x - p));
        return m;
    }
    double derivative(double x) const {
        double m = 1.0;
        for (double p : poles) m += coeff / ((x - p) * (x - p));
        return m;
    }
};

double bisect_root(const Secular& f, double lo, double hi, bool lo_virtual, bool hi_virtual) {
    // lo/hi may be poles carrying analytic signs (-inf/+inf side); never
    // evaluated there. Bisect to the last representable midpoint: near a pole
    // F' is enormous and anything short of full precision leaves a residual
    // the acceptance check cannot distinguish from a wrong root.
    const double flo = lo_virtual ? -1.0 : f(lo);
    const double fhi = hi_virtual ? +1.0 : f(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw NumericalError("secular bracketing failed on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    double a = lo, b = hi;
    for (;;) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fm < 0.0) a = mid;
        else b = mid;
    }
    const double fa = (a == lo && lo_virtual) ? 1e300 : std::abs(f(a));
    const double fb = (b == hi && hi_virtual) ? 1e300 : std::abs(f(b));
    return fa <= fb ? a : b;
}

} // namespace

std::vector<double> characteristic_roots(const ArraySpec& spec) {
    validate_spec(spec);
    const int n = spec.n_cavities;
    const double wq = spec.qubit_detuning();

    if (spec.hop() == 0.0) {
        // decoupled array: central cavity + qubit split by +-g around their
        // mean; every other cavity stays at omega_c
        std::vector<double> out;
        const double mean = 0.5 * wq;
        const double split = std::sqrt(1.0 + 0.25 * wq * wq);
        out.push_back(mean - split);
        for (int i = 0; i < n - 1; ++i) out.push_back(0.0);
        out.push_back(mean + split);
        std::sort(out.begin(), out.end());
        return out;
    }

    const std::vector<double> poles = secular_poles(spec);
    const Secular f{poles, 2.0 / (n + 1), wq};

    std::vector<double> roots;
    // exterior root below all poles
    {
        double lo = poles.front() - 1.0;
        double step = 1.0;
        while (f(lo) >= 0.0) { step *= 2.0; lo -= step; }
        roots.push_back(bisect_root(f, lo, poles.front(), false, true));
    }
    for (std::size_t i = 0; i + 1 < poles.size(); ++i)
        roots.push_back(bisect_root(f, poles[i], poles[i + 1], true, true));
    {
        double hi = poles.back() + 1.0;
        double step = 1.0;
        while (f(hi) <= 0.0) { step *= 2.0; hi += step; }
        roots.push_back(bisect_root(f, poles.back(), hi, true, false));
    }

    // residual check: 1e-12 relative to the summed term magnitudes, plus the
    // unavoidable |F'| * ulp floor of a double-precision abscissa (the pole
    // positions, not just x, set the cancellation scale of x - w_p)
    const double pole_scale =
        std::max({1.0, std::abs(poles.front()), std::abs(poles.back())});
    for (double x : roots) {
        const double tol = 1e-12 * std::max(1.0, f.magnitude(x)) +
                           8.0 * f.derivative(x) * 1.1e-16 * std::max(std::abs(x), pole_scale);
        if (std::abs(f(x)) > tol)
            throw NumericalError("secular root residual too large at x=" + std::to_string(x));
    }

    // dark modes: even-p band energies, exact eigenvalues with no qubit weight
    const BareBand band = bare_band(spec);
    for (int p = 2; p <= n; p += 2) roots.push_back(band.energies(p - 1));
    std::sort(roots.begin(), roots.end());
    if (static_cast<int>(roots.size()) != n + 1)
        throw NumericalError("characteristic spectrum has wrong count");
    return roots;
}

double inband_splitting(const ArraySpec& spec) {
    validate_spec(spec);
    const int m = (spec.n_cavities - 1) / 2;
    if (m % 2 != 0)
        throw ValidationError("doublet degenerate at omega_c, no splitting (M odd)");
    return 2.0 * std::sqrt(2.0 / (spec.n_cavities + 1));
}

} // namespace qmm
