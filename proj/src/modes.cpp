#include "qmm/modes.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace qmm {

Eigen::MatrixXd build_hamiltonian(const ArraySpec& spec) {
    validate_spec(spec);
    const int n = spec.n_cavities;
    const double j = spec.hop();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i + 1 < n; ++i) {
        h(i, i + 1) = -j;
        h(i + 1, i) = -j;
    }
    const int s = spec.qubit_site - 1; // 0-based cavity index
    h(s, n) = 1.0;                     // g in reduced units
    h(n, s) = 1.0;
    h(n, n) = spec.qubit_detuning();
    return h;
}

ModeBasis diagonalize(const Eigen::MatrixXd& hamiltonian) {
    const auto dim = hamiltonian.rows();
    if (dim < 1 || hamiltonian.cols() != dim)
        throw ValidationError("hamiltonian must be square and non-empty");
    const double scale = hamiltonian.cwiseAbs().maxCoeff();
    const double asym = (hamiltonian - hamiltonian.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-14 * std::max(scale, 1.0))
        throw ValidationError("hamiltonian is not symmetric within 1e-14 relative");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver failed to converge (info=" +
                             std::to_string(static_cast<int>(solver.info())) + ")");

    ModeBasis basis;
    basis.energies = solver.eigenvalues(); // ascending
    const Eigen::MatrixXd& vec = solver.eigenvectors();
    const int n = static_cast<int>(dim) - 1;
    basis.photon_amps = vec.topRows(n).transpose(); // (N+1) x N
    basis.qubit_amps = vec.row(n).transpose();
    return basis;
}

void refine_evanescent_tails(ModeBasis& basis, const ArraySpec& spec) {
    const int n = spec.n_cavities;
    const double j = spec.hop();
    if (j == 0.0 || n < 3) return;
    const int s = spec.qubit_site; // 1-based; chain rows are pure for sites 1..s-1
    constexpr double rel_threshold = 1e-8;

    Eigen::VectorXd tail(s);
    for (int m = 0; m < basis.n_modes(); ++m) {
        const double omega = basis.energies(m);
        double mx = basis.photon_amps.row(m).cwiseAbs().maxCoeff();
        mx = std::max(mx, std::abs(basis.qubit_amps(m)));
        if (mx == 0.0) continue;

        for (int side = 0; side < 2; ++side) {
            const bool left = (side == 0);
            const double edge = left ? basis.photon_amps(m, 0) : basis.photon_amps(m, n - 1);
            if (std::abs(edge) > rel_threshold * mx) continue;

            // chain recursion from the edge inward (the growing direction for
            // an evanescent tail, so roundoff stays relatively small):
            //   u_2 = -(w/J) u_1,   u_{j+1} = -(w/J) u_j - u_{j-1}
            tail(0) = 1.0;
            if (s > 1) tail(1) = -(omega / j) * tail(0);
            for (int i = 2; i < s; ++i) tail(i) = -(omega / j) * tail(i - 1) - tail(i - 2);

            // anchor at the site where the dense solution is largest
            int anchor = 0;
            double best = 0.0;
            for (int i = 0; i < s; ++i) {
                const int col = left ? i : n - 1 - i;
                const double v = std::abs(basis.photon_amps(m, col));
                if (v > best) { best = v; anchor = i; }
            }
            if (best == 0.0 || tail(anchor) == 0.0 || !std::isfinite(tail(s - 1))) continue;
            const int anchor_col = left ? anchor : n - 1 - anchor;
            const double scale = basis.photon_amps(m, anchor_col) / tail(anchor);
            for (int i = 0; i < s; ++i) {
                const int col = left ? i : n - 1 - i;
                basis.photon_amps(m, col) = tail(i) * scale;
            }
        }
    }
}

ModeBasis solve_modes(const ArraySpec& spec) {
    ModeBasis basis = diagonalize(build_hamiltonian(spec));
    basis.unit = spec.coupling_g;
    basis.origin = spec.omega_c;
    refine_evanescent_tails(basis, spec);
    return basis;
}

} // namespace qmm
