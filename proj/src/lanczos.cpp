// Restarted Lanczos for the lowest eigenvalue of a Pauli-sum Hamiltonian,
// matrix-free, with full reorthogonalization inside each cycle.
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "mbrlab/groundstate.hpp"
#include "mbrlab/pauli.hpp"

namespace mbrlab {
namespace groundstate {

namespace {

using Vec = Eigen::VectorXcd;

Vec matvec(const PauliSum& h, const Vec& x, int n) {
    StateVector sx(n);
    for (Eigen::Index i = 0; i < x.size(); ++i) sx.amps[i] = x(i);
    StateVector out = pauli_sum_times(h, sx);
    Vec y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) y(i) = out.amps[i];
    return y;
}

} // namespace

double lanczos_ground_energy(const PauliSum& h, int n_qubits, double tol, int max_restarts) {
    h.validate();
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    const int krylov = int(std::min<std::uint64_t>(48, dim));

    std::mt19937_64 rng(0x1a2b3c4dull);
    std::normal_distribution<double> gauss;
    Vec v(dim);
    for (std::uint64_t i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v.normalize();

    double prev_best = std::numeric_limits<double>::infinity();
    for (int cycle = 0; cycle < max_restarts; ++cycle) {
        std::vector<Vec> basis;
        basis.push_back(v);
        Eigen::VectorXd alpha(krylov), beta(krylov);
        int m = 0;
        for (int j = 0; j < krylov; ++j) {
            Vec w = matvec(h, basis[j], n_qubits);
            alpha(j) = (basis[j].adjoint() * w).value().real();
            // full reorthogonalization, twice for stability
            for (int pass = 0; pass < 2; ++pass)
                for (const Vec& q : basis) w -= (q.adjoint() * w).value() * q;
            const double nb = w.norm();
            m = j + 1;
            if (nb < 1e-12) {
                beta(j) = 0.0;
                break;
            }
            beta(j) = nb;
            if (j + 1 < krylov) basis.push_back(w / nb);
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            tri(j, j) = alpha(j);
            if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        Eigen::Index argmin = 0;
        es.eigenvalues().minCoeff(&argmin);
        const double e0 = es.eigenvalues()(argmin);
        Vec ritz = Vec::Zero(dim);
        for (int j = 0; j < m; ++j) ritz += es.eigenvectors()(j, argmin) * basis[j];
        ritz.normalize();
        const Vec hr = matvec(h, ritz, n_qubits);
        const double residual = (hr - e0 * ritz).norm();
        const double scale = std::max(1.0, std::abs(e0));
        if (residual <= tol * scale && std::abs(prev_best - e0) <= tol * scale) return e0;
        prev_best = e0;
        v = ritz; // thick restart from the best Ritz vector
    }
    throw std::runtime_error("lanczos_ground_energy: no convergence within restart budget");
}

} // namespace groundstate
} // namespace mbrlab
