#include "qmm/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qmm/analytics.hpp"
#include "qmm/errors.hpp"
#include "qmm/modes.hpp"
#include "qmm/resonance.hpp"
#include "qmm/scattering.hpp"

namespace qmm::cli {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: LF endings everywhere
    if (!out) throw ValidationError("cannot open output file: " + path);
    return out;
}

// Index-parallel map; results land in caller-owned storage so the emitted
// rows keep input order regardless of scheduling.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, n > 0 ? n : 1);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear(); // joins
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1);
    return grid;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

// "0.1" -> "0p1" for file names
std::string jtag(double j) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", j);
    std::string s = buf;
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

} // namespace

void cmd_spectrum(const RunConfig& cfg, const std::string& out, int threads) {
    validate_config(cfg);
    const ModeBasis basis = solve_modes(cfg.spec());
    const Ports ports = cfg.ports();
    const std::vector<double> grid = linspace(cfg.grid_min, cfg.grid_max, cfg.grid_points);

    std::vector<ScatteringResult> rows(grid.size());
    parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
        rows[i] = scatter(basis, ports, ProbeEnergy{grid[i], 0.0});
    });

    std::ofstream f = open_csv(out);
    f << "delta_over_g,T,R,phase_t\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        f << fmt(grid[i]) << ',' << fmt(rows[i].transmission()) << ','
          << fmt(rows[i].reflection()) << ',' << fmt(std::arg(rows[i].t)) << '\n';
}

void cmd_modes(const RunConfig& cfg, const std::string& out, int threads) {
    validate_config(cfg);
    std::vector<double> js = cfg.j_over_g_list;
    if (js.empty()) js.push_back(cfg.j_over_g);

    std::vector<ModeBasis> bases(js.size());
    parallel_for(static_cast<int>(js.size()), threads, [&](int i) {
        bases[i] = solve_modes(
            reduced_spec(cfg.n_cavities, js[i], cfg.omega_q_detuning_over_g));
    });

    std::ofstream f = open_csv(out);
    f << "J_over_g,n,omega_over_g,qubit_weight,u_1,u_N\n";
    for (std::size_t i = 0; i < js.size(); ++i) {
        const ModeBasis& b = bases[i];
        for (int n = 0; n < b.n_modes(); ++n)
            f << fmt(js[i]) << ',' << n << ',' << fmt(b.energies(n)) << ','
              << fmt(b.qubit_amps(n)) << ',' << fmt(b.edge_amp_left(n)) << ','
              << fmt(b.edge_amp_right(n)) << '\n';
    }
}

void cmd_linewidths(const RunConfig& cfg, const std::string& out, int threads) {
    validate_config(cfg);
    if (cfg.j_over_g_list.empty())
        throw ValidationError("linewidths requires a non-empty 'j_over_g_list'");
    const ArraySpec spec_template = cfg.spec();
    const Ports ports = cfg.ports();
    const bool absolute = cfg.unit_MHz > 0.0;

    std::vector<LinewidthRow> rows(cfg.j_over_g_list.size());
    parallel_for(static_cast<int>(rows.size()), threads, [&](int i) {
        rows[i] = linewidth_sweep(spec_template, ports, {cfg.j_over_g_list[i]}).front();
    });

    std::ofstream f = open_csv(out);
    f << "J_over_g,ok,fwhm_minus,fwhm_plus,center_minus,center_plus,"
         "shift_minus,shift_plus,w_weak_pred,w_strong_pred";
    if (absolute) f << ",fwhm_minus_MHz,tau_minus_s,fwhm_plus_MHz,tau_plus_s,tau_weak_pred_s";
    f << ",error\n";
    for (const LinewidthRow& r : rows) {
        f << fmt(r.j_over_g) << ',' << (r.ok ? 1 : 0) << ',' << fmt(r.fwhm_minus) << ','
          << fmt(r.fwhm_plus) << ',' << fmt(r.center_minus) << ',' << fmt(r.center_plus) << ','
          << fmt(r.shift_minus) << ',' << fmt(r.shift_plus) << ',' << fmt(r.w_weak) << ','
          << fmt(r.w_strong);
        if (absolute) {
            // tau = 1/W with W the Lorentzian half width; W_MHz = fwhm/2 * g_MHz
            const auto tau_s = [&](double fwhm) {
                const double w_mhz = 0.5 * fwhm * cfg.unit_MHz;
                return w_mhz > 0.0 ? 1e-6 / w_mhz : 0.0;
            };
            f << ',' << fmt(r.fwhm_minus * cfg.unit_MHz) << ',' << fmt(tau_s(r.fwhm_minus))
              << ',' << fmt(r.fwhm_plus * cfg.unit_MHz) << ',' << fmt(tau_s(r.fwhm_plus))
              << ',' << fmt(tau_s(2.0 * r.w_weak)); // lifetime of the weak-hopping asymptote
        }
        f << ',' << sanitize(r.error) << '\n';
    }
}

void cmd_occupation(const RunConfig& cfg, const std::string& out, int threads) {
    (void)threads; // single peak search; nothing worth parallelizing
    validate_config(cfg);
    if (!(cfg.kappa_l_over_g > 0.0) || !(cfg.kappa_r_over_g > 0.0))
        throw ValidationError("ports must be positive for the occupation command");

    const ArraySpec spec = cfg.spec();
    const Ports ports = cfg.ports();
    const ModeBasis basis = solve_modes(spec);
    const Branch branch = cfg.branch == "plus" ? Branch::BPlus : Branch::BMinus;
    const double anchor =
        branch == Branch::BMinus ? basis.energies(0) : basis.energies(basis.n_modes() - 1);

    const LinewidthPrediction pred = lorentzian_prediction(spec, ports, branch);
    const SpectrumFn fn = [&](double delta) {
        return scatter(basis, ports, ProbeEnergy{anchor, delta}).transmission();
    };
    const ResonancePeak peak = refine_peak(fn, anchor, pred.seed_width());

    const ScatteringResult res = scatter(basis, ports, ProbeEnergy{anchor, peak.center_offset});
    const ModeExcitations exc = mode_excitations(basis, ports, res);

    std::ofstream f = open_csv(out);
    f << "j,n_j\n";
    for (int j = 0; j < basis.n_sites(); ++j)
        f << (j + 1) << ',' << fmt(exc.site_occupation(j)) << '\n';
}

void cmd_figures(const std::string& which, const std::string& out_dir, int threads) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory: " + out_dir);
    const auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

    if (which == "fig2") {
        for (int n : {3, 13})
            for (double j : {0.1, 0.5}) {
                RunConfig cfg;
                cfg.n_cavities = n;
                cfg.j_over_g = j;
                cfg.kappa_l_over_g = cfg.kappa_r_over_g = 1.0;
                cfg.grid_min = -1.5;
                cfg.grid_max = 1.5;
                cfg.grid_points = 3001;
                cmd_spectrum(cfg, path("fig2_spectrum_N" + std::to_string(n) + "_J" + jtag(j) + ".csv"),
                             threads);
            }
        return;
    }
    if (which == "fig3") {
        for (int n : {3, 13}) {
            RunConfig cfg;
            cfg.n_cavities = n;
            cfg.j_over_g_list = linspace(0.0, 3.0, 61);
            cmd_modes(cfg, path("fig3_modes_N" + std::to_string(n) + ".csv"), threads);
        }
        return;
    }
    if (which == "fig4") {
        const std::vector<double> j_small = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0};
        const std::vector<double> j_large = {0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0};
        for (int n : {3, 13, 101}) {
            RunConfig cfg;
            cfg.n_cavities = n;
            cfg.kappa_l_over_g = cfg.kappa_r_over_g = 1.0;
            cfg.j_over_g_list = (n == 101) ? j_large : j_small;
            cmd_linewidths(cfg, path("fig4_linewidths_N" + std::to_string(n) + ".csv"), threads);
        }
        for (double j : {0.1, 0.5, 3.0}) {
            RunConfig cfg;
            cfg.n_cavities = 101;
            cfg.j_over_g = j;
            cfg.kappa_l_over_g = cfg.kappa_r_over_g = 1.0;
            cfg.branch = "minus";
            cmd_occupation(cfg, path("fig4_occupation_N101_J" + jtag(j) + ".csv"), threads);
        }
        return;
    }
    throw ValidationError("unknown figure '" + which + "' (expected fig2, fig3 or fig4)");
}

} // namespace qmm::cli
