#include "qmm/array.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qmm {

ArraySpec reduced_spec(int n_cavities, double j_over_g, double qubit_detuning_over_g) {
    ArraySpec s;
    s.n_cavities = n_cavities;
    s.omega_c = 0.0;
    s.hop_j = j_over_g;
    s.qubit_site = (n_cavities + 1) / 2;
    s.coupling_g = 1.0;
    s.omega_q = qubit_detuning_over_g;
    return validate_spec(s);
}

ArraySpec validate_spec(const ArraySpec& spec) {
    if (spec.n_cavities < 1)
        throw ValidationError("N must be a positive integer, got " + std::to_string(spec.n_cavities));
    if (spec.n_cavities % 2 == 0)
        throw ValidationError("N must be odd, got " + std::to_string(spec.n_cavities));
    if (spec.qubit_site != (spec.n_cavities + 1) / 2)
        throw ValidationError("qubit must be central: s = (N+1)/2 = " +
                              std::to_string((spec.n_cavities + 1) / 2) + ", got " +
                              std::to_string(spec.qubit_site));
    if (!(spec.coupling_g > 0.0))
        throw ValidationError("coupling g must be positive");
    if (spec.hop_j < 0.0)
        throw ValidationError("hopping J must be non-negative");
    if (!std::isfinite(spec.omega_c) || !std::isfinite(spec.omega_q) ||
        !std::isfinite(spec.hop_j) || !std::isfinite(spec.coupling_g))
        throw ValidationError("spec frequencies must be finite");
    return spec;
}

Ports symmetric_ports(double kappa_over_g) {
    return ports_from_kappas(kappa_over_g, kappa_over_g);
}

Ports ports_from_kappas(double kappa_l_over_g, double kappa_r_over_g) {
    if (kappa_l_over_g < 0.0 || kappa_r_over_g < 0.0)
        throw ValidationError("kappa must be non-negative");
    Ports p;
    p.group_velocity = 1.0;
    p.v_left = std::sqrt(kappa_l_over_g);
    p.v_right = std::sqrt(kappa_r_over_g);
    return p;
}

Ports validate_ports(const Ports& ports) {
    if (!(ports.group_velocity > 0.0))
        throw ValidationError("group velocity must be positive");
    if (!std::isfinite(ports.v_left) || !std::isfinite(ports.v_right))
        throw ValidationError("port couplings must be finite");
    return ports;
}

BareBand bare_band(const ArraySpec& spec) {
    validate_spec(spec);
    const int n = spec.n_cavities;
    const double j = spec.hop();
    const double pref = std::sqrt(2.0 / (n + 1));
    BareBand band;
    band.energies.resize(n);
    band.site_amps.resize(n);
    for (int p = 1; p <= n; ++p) {
        const double arg = std::numbers::pi * p / (n + 1);
        band.energies(p - 1) = -2.0 * j * std::cos(arg);
        // s = (N+1)/2, so sin(pi p s/(N+1)) = sin(pi p/2): exactly 0 for even p
        switch (p % 4) {
            case 1: band.site_amps(p - 1) = pref; break;
            case 3: band.site_amps(p - 1) = -pref; break;
            default: band.site_amps(p - 1) = 0.0; break;
        }
    }
    return band;
}

} // namespace qmm
