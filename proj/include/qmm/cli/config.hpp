#pragma once

#include <string>
#include <vector>

#include "qmm/array.hpp"

namespace qmm::cli {

// Flat key-value run configuration. All energies are offsets from omega_c in
// units of g; `unit_MHz` (the value of g in MHz) switches on absolute-unit
// output columns where a command supports them.
struct RunConfig {
    int n_cavities = 3;                    // key: N
    double j_over_g = 0.1;                 // key: J_over_g
    double kappa_l_over_g = 1.0;           // key: kappa_l_over_g (or kappa_over_g for both)
    double kappa_r_over_g = 1.0;           // key: kappa_r_over_g
    double omega_q_detuning_over_g = 0.0;  // key: omega_q_detuning_over_g
    double grid_min = -1.5;                // key: grid_min
    double grid_max = 1.5;                 // key: grid_max
    int grid_points = 3001;                // key: grid_points
    std::vector<double> j_over_g_list;     // key: j_over_g_list (sweep commands)
    std::string branch = "minus";          // key: branch ("minus" | "plus")
    double unit_MHz = 0.0;                 // key: unit_MHz (0 = reduced output only)

    bool operator==(const RunConfig&) const = default;

    ArraySpec spec() const;  // reduced spec at j_over_g
    Ports ports() const;
};

// Parse a flat JSON config file. Unknown keys and invariant violations throw
// ValidationError naming the key.
RunConfig load_config(const std::string& path);

// Apply one `key=value` override (flag form); value parsed like the JSON field.
// For j_over_g_list the value is a comma-separated number list.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Re-check the cross-field invariants (grid, branch name, spec/ports).
void validate_config(const RunConfig& cfg);

// Canonical JSON text such that load(emit(cfg)) == cfg.
std::string emit_config(const RunConfig& cfg);
RunConfig config_from_text(const std::string& text);

} // namespace qmm::cli
