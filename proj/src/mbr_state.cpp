// Assembly, Gram matrices and expectation values for MBR states.
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "mbrlab/mbr_state.hpp"

namespace mbrlab {

double GramMatrix::hermiticity_deviation() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double GramMatrix::diagonal_block_deviation() const {
    double dev = 0.0;
    const std::size_t nb = block_offset.size();
    for (std::size_t b = 0; b + 1 < nb; ++b) {
        const std::size_t lo = block_offset[b], hi = block_offset[b + 1];
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = lo; j < hi; ++j) {
                cplx want = (i == j) ? cplx(1.0) : cplx(0.0);
                dev = std::max(dev, std::abs(entries(i, j) - want));
            }
    }
    return dev;
}

double GramMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (entries + entries.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

StateVector assemble(const MbrState& m) {
    m.validate();
    const int n = m.n_qubits();
    StateVector acc(n);
    acc.amps.assign(acc.dim(), cplx(0.0));
    for (std::size_t b = 0; b < m.n_bases(); ++b) {
        StateVector comp = apply_circuit(m.bases[b], m.components[b].dense());
        for (std::uint64_t i = 0; i < acc.dim(); ++i)
            acc.amps[i] += m.weights[b] * comp.amps[i];
    }
    return acc;
}

namespace {

struct FlatLayout {
    std::vector<std::size_t> offsets; // one past the end appended
    std::size_t dim;
};

FlatLayout layout_of(const MbrState& m) {
    FlatLayout l;
    std::size_t off = 0;
    for (const SparseState& s : m.components) {
        l.offsets.push_back(off);
        off += s.k();
    }
    l.offsets.push_back(off);
    l.dim = off;
    return l;
}

// Columns U_a |j_a> for every (basis, slot), as dense vectors.
std::vector<StateVector> frame_columns(const MbrState& m) {
    std::vector<StateVector> cols;
    for (std::size_t a = 0; a < m.n_bases(); ++a)
        for (std::uint64_t j : m.components[a].support)
            cols.push_back(basis_column(m.bases[a], j));
    return cols;
}

GramMatrix gram_from_columns(const MbrState& m,
                             const std::vector<StateVector>& cols) {
    FlatLayout l = layout_of(m);
    GramMatrix f;
    f.entries.resize(l.dim, l.dim);
    f.block_offset.assign(l.offsets.begin(), l.offsets.end() - 1);
    for (std::size_t b = 0; b < m.n_bases(); ++b)
        for (std::size_t i = 0; i < m.components[b].k(); ++i)
            f.flat_to_block.emplace_back(int(b), int(i));
    for (std::size_t i = 0; i < l.dim; ++i)
        for (std::size_t j = 0; j < l.dim; ++j) f.entries(i, j) = inner(cols[i], cols[j]);
    return f;
}

} // namespace

GramMatrix gram(const MbrState& m) {
    m.validate();
    return gram_from_columns(m, frame_columns(m));
}

GramMatrix frame_gram(const std::vector<Circuit>& bases,
                      const std::vector<std::vector<std::uint64_t>>& supports) {
    if (bases.size() != supports.size())
        throw std::invalid_argument("frame_gram: bases/supports size mismatch");
    std::vector<StateVector> cols;
    GramMatrix f;
    std::size_t off = 0;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        f.block_offset.push_back(off);
        for (std::size_t i = 0; i < supports[b].size(); ++i) {
            cols.push_back(basis_column(bases[b], supports[b][i]));
            f.flat_to_block.emplace_back(int(b), int(i));
        }
        off += supports[b].size();
    }
    f.entries.resize(off, off);
    for (std::size_t i = 0; i < off; ++i)
        for (std::size_t j = 0; j < off; ++j) f.entries(i, j) = inner(cols[i], cols[j]);
    return f;
}

Eigen::MatrixXcd observable_gram(const MbrState& m, const PauliSum& obs) {
    m.validate();
    obs.validate();
    if (obs.n_qubits != m.n_qubits())
        throw std::invalid_argument("observable size does not match the MBR state");
    std::vector<StateVector> cols = frame_columns(m);
    FlatLayout l = layout_of(m);
    Eigen::MatrixXcd fo(l.dim, l.dim);
    for (std::size_t j = 0; j < l.dim; ++j) {
        StateVector ocol = pauli_sum_times(obs, cols[j]);
        for (std::size_t i = 0; i < l.dim; ++i) fo(i, j) = inner(cols[i], ocol);
    }
    return fo;
}

double expectation(const MbrState& m, const Eigen::MatrixXcd& obs_gram, const GramMatrix& f) {
    m.validate();
    FlatLayout l = layout_of(m);
    if (std::size_t(obs_gram.rows()) != l.dim || f.dim() != l.dim)
        throw std::invalid_argument("expectation: matrix dimensions inconsistent with state");
    Eigen::VectorXcd w(l.dim); // alpha_b c^(b) stacked
    std::size_t idx = 0;
    for (std::size_t b = 0; b < m.n_bases(); ++b)
        for (const cplx& c : m.components[b].coeffs) w(idx++) = m.weights[b] * c;
    const cplx num = w.adjoint() * obs_gram * w;
    const cplx den = w.adjoint() * f.entries * w;
    if (den.real() < 1e-12)
        throw std::domain_error("expectation: state has numerically zero norm");
    return num.real() / den.real();
}

int gram_rank(const GramMatrix& f, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.entries);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

} // namespace mbrlab
