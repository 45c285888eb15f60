#pragma once

#include <string>

#include "qmm/cli/config.hpp"

namespace qmm::cli {

// Each command writes one CSV (UTF-8, LF, header row, %.16e floats) to `out`
// and throws ValidationError / NumericalError on failure; the binary maps
// those to exit codes 2 / 3.

// delta_over_g,T,R,phase_t over the configured probe grid.
void cmd_spectrum(const RunConfig& cfg, const std::string& out, int threads);

// J_over_g,n,omega_over_g,qubit_weight,u_1,u_N; one block of N+1 rows per
// entry of j_over_g_list (falling back to the scalar J_over_g).
void cmd_modes(const RunConfig& cfg, const std::string& out, int threads);

// One linewidth_sweep row per j_over_g_list entry, with the asymptotic
// predictions alongside; unit_MHz > 0 adds absolute widths and lifetimes.
void cmd_linewidths(const RunConfig& cfg, const std::string& out, int threads);

// j,n_j site occupation at the located quasi-bound peak of cfg.branch.
void cmd_occupation(const RunConfig& cfg, const std::string& out, int threads);

// Regenerate the datasets behind one figure into directory `out_dir`.
// which: "fig2" | "fig3" | "fig4".
void cmd_figures(const std::string& which, const std::string& out_dir, int threads);

} // namespace qmm::cli
