#include "qmm/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmm {

namespace {

// Compensated summation; the mode sums cancel almost completely at the DIR
// zero and at far-detuned probes.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct EdgeWeights {
    // w_{l,n} = V_l u_n^1 / sqrt(2 v_g g),  w_{r,n} analogous; with these,
    // Gamma_l = 1 + i sum w_l^2/d, beta = sum w_l w_r/d (d in reduced units)
    double fac_l, fac_r;
    const ModeBasis* basis;

    double wl(int n) const { return fac_l * basis->edge_amp_left(n); }
    double wr(int n) const { return fac_r * basis->edge_amp_right(n); }
};

EdgeWeights edge_weights(const ModeBasis& basis, const Ports& ports) {
    const double denom = std::sqrt(2.0 * ports.group_velocity * basis.unit);
    return EdgeWeights{ports.v_left / denom, ports.v_right / denom, &basis};
}

struct ScatterCore {
    Complex t, r;
    bool regularized = false;
    int grp_first = 0, grp_last = -1; // inclusive mode-index range of the pole group
    double d = 0.0;                   // probe minus group energy
    double A = 0.0, B = 0.0, C = 0.0; // group edge-weight sums
    bool parallel_group = true;       // C^2 - AB == 0 (always true for one mode)
    double ap = 0.0, bp = 0.0, cp = 0.0; // sums over the remaining modes
    Complex den;                      // cleared denominator (by d, or d^2 when
                                      // the group is non-parallel)
};

double mode_distance(const ModeBasis& basis, ProbeEnergy eps, int n) {
    return (eps.ref - basis.energies(n)) + eps.offset;
}

int nearest_mode(const ModeBasis& basis, ProbeEnergy eps) {
    int best = 0;
    double bd = std::abs(mode_distance(basis, eps, 0));
    for (int n = 1; n < basis.n_modes(); ++n) {
        const double d = std::abs(mode_distance(basis, eps, n));
        if (d < bd) { bd = d; best = n; }
    }
    return best;
}

ScatterCore scatter_core(const ModeBasis& basis, const Ports& ports, ProbeEnergy eps) {
    const EdgeWeights w = edge_weights(basis, ports);
    const int n_modes = basis.n_modes();
    ScatterCore core;

    const int m = nearest_mode(basis, eps);
    const double dm = mode_distance(basis, eps, m);
    core.regularized = std::abs(dm) < pole_threshold;

    if (!core.regularized) {
        KahanSum sa, sb, sc;
        for (int n = 0; n < n_modes; ++n) {
            const double d = mode_distance(basis, eps, n);
            sa.add(w.wl(n) * w.wl(n) / d);
            sb.add(w.wr(n) * w.wr(n) / d);
            sc.add(w.wl(n) * w.wr(n) / d);
        }
        core.ap = sa.value();
        core.bp = sb.value();
        core.cp = sc.value();
        const Complex gl(1.0, core.ap), gr(1.0, core.bp);
        const double beta = core.cp;
        core.den = gl * gr + beta * beta;
        core.t = Complex(0.0, -2.0) * beta / core.den;
        core.r = (std::conj(gl) * gr - beta * beta) / core.den;
        return core;
    }

    // Pole group: modes (numerically) degenerate with the nearest one. All
    // group members share the distance d; the leading 1/d^2 terms of the
    // denominator cancel through C^2 = AB (exact per mode), so the rational
    // form cleared of the pole is finite and continuous.
    const double grp_tol = 1e-12 * std::max(1.0, std::abs(basis.energies(m)));
    int first = m, last = m;
    while (first > 0 && std::abs(basis.energies(first - 1) - basis.energies(m)) <= grp_tol) --first;
    while (last + 1 < n_modes && std::abs(basis.energies(last + 1) - basis.energies(m)) <= grp_tol) ++last;
    core.grp_first = first;
    core.grp_last = last;
    core.d = dm;

    for (int n = first; n <= last; ++n) {
        core.A += w.wl(n) * w.wl(n);
        core.B += w.wr(n) * w.wr(n);
        core.C += w.wl(n) * w.wr(n);
    }
    // C^2 - AB by the Lagrange identity: exact zero for a single mode, and
    // free of cancellation otherwise
    double cross = 0.0;
    for (int i = first; i <= last; ++i)
        for (int k = i + 1; k <= last; ++k) {
            const double det = w.wl(i) * w.wr(k) - w.wl(k) * w.wr(i);
            cross -= det * det;
        }
    core.parallel_group = (cross == 0.0);

    KahanSum sa, sb, sc;
    for (int n = 0; n < n_modes; ++n) {
        if (n >= first && n <= last) continue;
        const double d = mode_distance(basis, eps, n);
        sa.add(w.wl(n) * w.wl(n) / d);
        sb.add(w.wr(n) * w.wr(n) / d);
        sc.add(w.wl(n) * w.wr(n) / d);
    }
    core.ap = sa.value();
    core.bp = sb.value();
    core.cp = sc.value();

    const Complex P(1.0, core.ap), Q(1.0, core.bp);
    const Complex Pc = std::conj(P);
    const double d = core.d, A = core.A, B = core.B, C = core.C, cp = core.cp;
    const Complex I(0.0, 1.0);
    if (core.parallel_group) {
        // numerator and denominator cleared by one power of d
        core.den = d * P * Q + I * (P * B + Q * A) + cp * (2.0 * C + cp * d);
        core.t = -2.0 * I * (C + cp * d) / core.den;
        core.r = (d * Pc * Q + I * (Pc * B - Q * A) - cp * (2.0 * C + cp * d)) / core.den;
    } else {
        // cleared by d^2; finite at d = 0 because cross != 0
        core.den = d * d * P * Q + I * d * (P * B + Q * A) + cross + cp * d * (2.0 * C + cp * d);
        core.t = -2.0 * I * d * (C + cp * d) / core.den;
        core.r = (d * d * Pc * Q + I * d * (Pc * B - Q * A) - cross - cp * d * (2.0 * C + cp * d)) /
                 core.den;
    }
    return core;
}

} // namespace

GammaBeta gamma_beta(const ModeBasis& basis, const Ports& ports, ProbeEnergy eps) {
    const int m = nearest_mode(basis, eps);
    const double dm = mode_distance(basis, eps, m);
    if (std::abs(dm) < pole_threshold)
        throw PoleProximityError("pole proximity: probe within " + std::to_string(pole_threshold) +
                                 " of mode " + std::to_string(m) + "; use scatter()");
    const EdgeWeights w = edge_weights(basis, ports);
    KahanSum sa, sb, sc;
    for (int n = 0; n < basis.n_modes(); ++n) {
        const double d = mode_distance(basis, eps, n);
        sa.add(w.wl(n) * w.wl(n) / d);
        sb.add(w.wr(n) * w.wr(n) / d);
        sc.add(w.wl(n) * w.wr(n) / d);
    }
    return GammaBeta{Complex(1.0, sa.value()), Complex(1.0, sb.value()), Complex(sc.value(), 0.0)};
}

ScatteringResult scatter(const ModeBasis& basis, const Ports& ports, ProbeEnergy eps) {
    const ScatterCore core = scatter_core(basis, ports, eps);
    ScatteringResult res;
    res.probe = eps;
    res.t = core.t;
    res.r = core.r;
    res.wavenumber = (basis.origin + basis.unit * eps.value()) / ports.group_velocity;
    res.half_length = 0.0;

    if (!core.regularized) {
        res.gamma_left = Complex(1.0, core.ap);
        res.gamma_right = Complex(1.0, core.bp);
        res.beta = core.cp;
    } else {
        // diagnostic values; the group contribution diverges at d = 0
        const double inv = (core.d != 0.0) ? 1.0 / core.d : 0.0;
        res.gamma_left = Complex(1.0, core.ap + core.A * inv);
        res.gamma_right = Complex(1.0, core.bp + core.B * inv);
        res.beta = core.cp + core.C * inv;
    }
    return res;
}

ModeExcitations mode_excitations(const ModeBasis& basis, const Ports& ports,
                                 const ScatteringResult& result) {
    const ScatterCore core = scatter_core(basis, ports, result.probe);
    const EdgeWeights w = edge_weights(basis, ports);
    const int n_modes = basis.n_modes();
    const int n_sites = basis.n_sites();
    const double phi0 = std::sqrt(ports.group_velocity / (2.0 * basis.unit));
    const Complex I(0.0, 1.0);

    ModeExcitations exc;
    exc.amplitudes.resize(n_modes);

    const Complex one_plus_r = 1.0 + core.r;
    for (int n = 0; n < n_modes; ++n) {
        const bool in_group = core.regularized && n >= core.grp_first && n <= core.grp_last;
        if (!in_group) {
            const double d = mode_distance(basis, result.probe, n);
            exc.amplitudes(n) = phi0 * (w.wl(n) * one_plus_r + w.wr(n) * core.t) / d;
            continue;
        }
        const Complex Q(1.0, core.bp);
        const double d = core.d;
        if (core.parallel_group) {
            // w_l B - w_r C vanishes for a parallel group; the residue of the
            // pole cancels and the amplitude stays finite
            double diff = 0.0;
            if (core.grp_first != core.grp_last && d != 0.0)
                diff = (w.wl(n) * core.B - w.wr(n) * core.C) / d;
            exc.amplitudes(n) =
                phi0 * 2.0 * (w.wl(n) * Q + I * diff - I * w.wr(n) * core.cp) / core.den;
        } else {
            exc.amplitudes(n) = phi0 * 2.0 *
                                (w.wl(n) * (d * Q + I * core.B) - I * w.wr(n) * (core.C + core.cp * d)) /
                                core.den;
        }
    }

    exc.site_occupation.resize(n_sites);
    for (int j = 0; j < n_sites; ++j) {
        Complex amp(0.0, 0.0);
        for (int n = 0; n < n_modes; ++n) amp += exc.amplitudes(n) * basis.photon_amps(n, j);
        exc.site_occupation(j) = std::norm(amp);
    }
    Complex qa(0.0, 0.0);
    for (int n = 0; n < n_modes; ++n) qa += exc.amplitudes(n) * basis.qubit_amps(n);
    exc.qubit_occupation = std::norm(qa);
    return exc;
}

Complex evaluate_waveguide_amplitude(const ScatteringResult& result, Side side, double x) {
    const double k = result.wavenumber;
    const Complex phase = std::exp(Complex(0.0, k * (x - result.half_length)));
    const auto theta = [](double v) { return v >= 0.0 ? 1.0 : 0.0; }; // theta(0) := 1
    if (side == Side::Left) return phase * (theta(-x) + result.r * theta(x));
    return phase * result.t * theta(x);
}

std::vector<SpectrumRow> transmission_spectrum(const ModeBasis& basis, const Ports& ports,
                                               const std::vector<double>& grid) {
    std::vector<SpectrumRow> rows;
    rows.reserve(grid.size());
    for (double e : grid) {
        const ScatteringResult res = scatter(basis, ports, ProbeEnergy{e, 0.0});
        rows.push_back({e, res.transmission(), res.reflection(), std::arg(res.t)});
    }
    return rows;
}

} // namespace qmm
