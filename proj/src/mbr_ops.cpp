// Sparse ranks, basis redundancy and MBR fitting.
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <Eigen/SVD>

#include "mbrlab/mbr_state.hpp"

namespace mbrlab {

namespace {

// Indices sorted by weight, heaviest first, ties toward the lower index.
std::vector<std::uint64_t> weight_order(const StateVector& s) {
    std::vector<std::uint64_t> idx(s.dim());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::uint64_t a, std::uint64_t b) {
        double wa = std::norm(s.amps[a]), wb = std::norm(s.amps[b]);
        if (wa != wb) return wa > wb;
        return a < b;
    });
    return idx;
}

} // namespace

int cb_rank(const StateVector& s, double eps) {
    if (eps < 0.0 || eps > 1.0) throw std::domain_error("cb_rank: eps must lie in [0, 1]");
    std::vector<double> weights(s.dim());
    for (std::uint64_t i = 0; i < s.dim(); ++i) weights[i] = std::norm(s.amps[i]);
    std::sort(weights.begin(), weights.end(), std::greater<double>());
    double acc = 0.0;
    const double goal = 1.0 - eps;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (acc >= goal) return int(k + 1);
    }
    return int(weights.size());
}

SparseApprox best_sparse_approx(const StateVector& s, int K) {
    if (K < 1 || std::uint64_t(K) > s.dim())
        throw std::invalid_argument("best_sparse_approx: K out of range");
    std::vector<std::uint64_t> order = weight_order(s);
    std::vector<std::uint64_t> support(order.begin(), order.begin() + K);
    std::vector<cplx> coeffs(K);
    double mass = 0.0;
    for (int k = 0; k < K; ++k) {
        coeffs[k] = s.amps[support[k]];
        mass += std::norm(coeffs[k]);
    }
    SparseApprox out;
    out.fidelity = mass;
    if (mass <= 0.0) {
        // degenerate input: fall back to a unit basis state on the support
        coeffs[0] = 1.0;
    }
    out.state = SparseState(s.n_qubits, std::move(support), std::move(coeffs));
    return out;
}

double psi_plus0_cb_formula(int n, double eps) {
    const double c = 1.0 + std::pow(2.0, -0.5 * n);
    return 1.0 + std::floor((1.0 - eps - 0.5 * c) * (std::pow(2.0, n) - 1.0));
}

StateVector make_psi_plus0(int n) {
    const double s = std::pow(2.0, -0.5 * n);
    const double c = 1.0 + s;
    StateVector v(n);
    v.amps.assign(v.dim(), cplx(s / std::sqrt(2.0 * c)));
    v.amps[0] = (1.0 + s) / std::sqrt(2.0 * c);
    return v;
}

namespace {

double max_singular_of_submatrix(const MatrixXcd& u, const std::vector<int>& rows,
                                 const std::vector<int>& cols) {
    const int k = int(rows.size());
    MatrixXcd sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = u(rows[i], cols[j]);
    if (k == 1) return std::abs(sub(0, 0));
    Eigen::JacobiSVD<MatrixXcd> svd(sub);
    return svd.singularValues()(0);
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        fn(pick);
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i) --i;
        if (i < 0) return;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

} // namespace

double uk_fidelity(const Circuit& u, int K, UkMode mode) {
    const int n = u.n_qubits;
    const int dim = 1 << n;
    if (K < 1 || K > dim) throw std::invalid_argument("uk_fidelity: K out of range");
    if (mode == UkMode::exact && (n > 5 || K > 3))
        throw std::invalid_argument("uk_fidelity: exact mode requires n <= 5 and K <= 3");
    MatrixXcd mat = dense_unitary(u);
    if (mode == UkMode::exact) {
        double best = 0.0;
        std::vector<std::vector<int>> subsets;
        for_each_subset(dim, K, [&](const std::vector<int>& s) { subsets.push_back(s); });
        for (const auto& rows : subsets)
            for (const auto& cols : subsets)
                best = std::max(best, max_singular_of_submatrix(mat, rows, cols));
        return best;
    }
    // Greedy: take the K largest entries on distinct rows and columns.
    struct Entry {
        double mag;
        int row, col;
    };
    std::vector<Entry> entries;
    entries.reserve(std::size_t(dim) * dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) entries.push_back({std::abs(mat(i, j)), i, j});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.mag != b.mag) return a.mag > b.mag;
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    std::vector<int> rows, cols;
    std::vector<bool> row_used(dim, false), col_used(dim, false);
    for (const Entry& e : entries) {
        if (int(rows.size()) == K) break;
        if (row_used[e.row] || col_used[e.col]) continue;
        row_used[e.row] = col_used[e.col] = true;
        rows.push_back(e.row);
        cols.push_back(e.col);
    }
    return max_singular_of_submatrix(mat, rows, cols);
}

FitResult fit_weights(const StateVector& target, const std::vector<Circuit>& bases, int K) {
    if (bases.empty()) throw std::invalid_argument("fit_weights: need at least one basis");
    const int n = target.n_qubits;
    FitResult out;
    std::vector<double> partial; // |<psi_b|U_b^dag psi>| = sqrt(retained mass)
    std::vector<StateVector> comp_dense;
    for (const Circuit& u : bases) {
        if (u.n_qubits != n) throw std::invalid_argument("fit_weights: basis size mismatch");
        StateVector rotated = apply_circuit(dagger(u), target);
        SparseApprox approx = best_sparse_approx(rotated, K);
        out.state.bases.push_back(u);
        out.state.components.push_back(approx.state);
        partial.push_back(std::sqrt(std::max(0.0, approx.fidelity)));
        comp_dense.push_back(apply_circuit(u, approx.state.dense()));
    }
    const std::size_t nb = bases.size();
    double total = std::accumulate(partial.begin(), partial.end(), 0.0);
    std::vector<double> alpha = partial;
    if (total <= 0.0) {
        out.degenerate = true;
        alpha.assign(nb, 1.0);
    }
    // normalize so the assembled state has unit norm
    Eigen::MatrixXcd overlap(nb, nb);
    for (std::size_t a = 0; a < nb; ++a)
        for (std::size_t b = 0; b < nb; ++b) overlap(a, b) = inner(comp_dense[a], comp_dense[b]);
    Eigen::VectorXd av(nb);
    for (std::size_t b = 0; b < nb; ++b) av(b) = alpha[b];
    const double q = (av.cast<cplx>().adjoint() * overlap * av.cast<cplx>()).value().real();
    if (q <= 0.0) {
        out.degenerate = true;
        out.state.weights.assign(nb, 0.0);
        out.overlap = 0.0;
        return out;
    }
    const double scale = 1.0 / std::sqrt(q);
    out.state.weights.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) out.state.weights[b] = alpha[b] * scale;
    out.overlap = std::abs(inner(target, assemble(out.state)));
    return out;
}

} // namespace mbrlab
