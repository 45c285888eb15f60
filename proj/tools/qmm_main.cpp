#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmm/cli/commands.hpp"
#include "qmm/cli/config.hpp"
#include "qmm/errors.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out;
    int threads = 1;
    // raw flag overrides applied after the config file is loaded
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool out_required = true) {
    cmd->add_option("--config", opts.config_path, "flat JSON config file");
    auto* out = cmd->add_option("--out", opts.out, "output CSV path (or directory for figures)");
    if (out_required) out->required();
    cmd->add_option("--threads", opts.threads, "worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    for (const char* key :
         {"N", "J_over_g", "kappa_over_g", "kappa_l_over_g", "kappa_r_over_g",
          "omega_q_detuning_over_g", "grid_min", "grid_max", "grid_points", "j_over_g_list",
          "branch", "unit_MHz"}) {
        const std::string name = key;
        cmd->add_option_function<std::string>(
            "--" + name,
            [&opts, name](const std::string& v) { opts.overrides.emplace_back(name, v); },
            "override config key " + name);
    }
}

qmm::cli::RunConfig resolve(const CommonOpts& opts) {
    qmm::cli::RunConfig cfg;
    if (!opts.config_path.empty()) cfg = qmm::cli::load_config(opts.config_path);
    for (const auto& [key, value] : opts.overrides) qmm::cli::apply_override(cfg, key, value);
    qmm::cli::validate_config(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qmm: single-photon transport through a cavity array with a central qubit"};
    app.require_subcommand(1);

    CommonOpts spectrum_opts, modes_opts, linewidths_opts, occupation_opts, figures_opts;
    std::string figure_name;

    add_common(app.add_subcommand("spectrum", "transmission/reflection over a probe grid"),
               spectrum_opts);
    add_common(app.add_subcommand("modes", "eigenmodes over a J/g sweep"), modes_opts);
    add_common(app.add_subcommand("linewidths", "quasi-bound resonance widths over a J/g sweep"),
               linewidths_opts);
    add_common(app.add_subcommand("occupation", "site occupation at a quasi-bound peak"),
               occupation_opts);
    auto* figures = app.add_subcommand("figures", "regenerate a reference dataset");
    figures->add_option("which", figure_name, "fig2 | fig3 | fig4")->required();
    add_common(figures, figures_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("spectrum"))
            qmm::cli::cmd_spectrum(resolve(spectrum_opts), spectrum_opts.out,
                                   spectrum_opts.threads);
        else if (app.got_subcommand("modes"))
            qmm::cli::cmd_modes(resolve(modes_opts), modes_opts.out, modes_opts.threads);
        else if (app.got_subcommand("linewidths"))
            qmm::cli::cmd_linewidths(resolve(linewidths_opts), linewidths_opts.out,
                                     linewidths_opts.threads);
        else if (app.got_subcommand("occupation"))
            qmm::cli::cmd_occupation(resolve(occupation_opts), occupation_opts.out,
                                     occupation_opts.threads);
        else if (app.got_subcommand("figures"))
            qmm::cli::cmd_figures(figure_name, figures_opts.out, figures_opts.threads);
    } catch (const qmm::ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const qmm::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
