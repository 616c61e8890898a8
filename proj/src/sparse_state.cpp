#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mbrlab/mbr_state.hpp"

namespace mbrlab {

SparseState::SparseState(int n, std::vector<std::uint64_t> sup, std::vector<cplx> cs)
    : n_qubits(n), support(std::move(sup)), coeffs(std::move(cs)) {
    canonicalize();
}

void SparseState::canonicalize() {
    if (support.size() != coeffs.size())
        throw std::invalid_argument("sparse state: support/coefficient size mismatch");
    if (support.empty()) throw std::invalid_argument("sparse state: empty support");
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    std::set<std::uint64_t> seen;
    for (std::uint64_t i : support) {
        if (i >= dim) throw std::invalid_argument("sparse state: support index out of range");
        if (!seen.insert(i).second)
            throw std::invalid_argument("sparse state: repeated support index");
    }
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double wa = std::norm(coeffs[a]), wb = std::norm(coeffs[b]);
        if (wa != wb) return wa > wb;
        return support[a] < support[b];
    });
    std::vector<std::uint64_t> sup2(support.size());
    std::vector<cplx> cs2(coeffs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sup2[i] = support[order[i]];
        cs2[i] = coeffs[order[i]];
    }
    support = std::move(sup2);
    coeffs = std::move(cs2);
    double norm2 = 0.0;
    for (const cplx& c : coeffs) norm2 += std::norm(c);
    if (std::abs(norm2 - 1.0) > 1e-9) {
        if (norm2 <= 0.0) throw std::invalid_argument("sparse state: zero coefficients");
        const double inv = 1.0 / std::sqrt(norm2);
        for (cplx& c : coeffs) c *= inv;
    }
}

StateVector SparseState::dense() const {
    StateVector s(n_qubits);
    s.amps.assign(s.dim(), cplx(0.0));
    for (std::size_t i = 0; i < support.size(); ++i) s.amps[support[i]] = coeffs[i];
    return s;
}

void MbrState::validate() const {
    if (bases.empty()) throw std::invalid_argument("MBR state: need at least one basis");
    if (bases.size() != weights.size() || bases.size() != components.size())
        throw std::invalid_argument("MBR state: bases/weights/components size mismatch");
    const int n = bases.front().n_qubits;
    for (const Circuit& c : bases) {
        c.validate();
        if (c.n_qubits != n)
            throw std::invalid_argument("MBR state: bases disagree on qubit count");
    }
    for (double w : weights)
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("MBR state: weights must be finite and nonnegative");
    for (const SparseState& s : components) {
        if (s.n_qubits != n)
            throw std::invalid_argument("MBR state: component qubit count mismatch");
        double norm2 = 0.0;
        for (const cplx& c : s.coeffs) norm2 += std::norm(c);
        if (std::abs(norm2 - 1.0) > 1e-9)
            throw std::invalid_argument("MBR state: component not normalized");
    }
}

} // namespace mbrlab
