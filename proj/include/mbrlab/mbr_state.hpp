// The multiple-basis representation: weighted sparse components, each
// expressed in its own circuit-specified basis, plus the overlap (Gram)
// machinery that makes the representation usable.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mbrlab/circuit.hpp"
#include "mbrlab/pauli.hpp"
#include "mbrlab/qcore.hpp"
#include "mbrlab/statevector.hpp"

namespace mbrlab {

// K-sparse state in the computational basis. Support is kept sorted by
// nonincreasing |coeff|^2 (ties toward the lower index) and coefficients
// are normalized to unit 2-norm.
struct SparseState {
    int n_qubits = 0;
    std::vector<std::uint64_t> support;
    std::vector<cplx> coeffs;

    SparseState() = default;
    SparseState(int n, std::vector<std::uint64_t> sup, std::vector<cplx> cs);

    std::size_t k() const { return support.size(); }
    void canonicalize(); // sort by weight, check invariants; throws if broken
    StateVector dense() const;
};

struct MbrState {
    std::vector<Circuit> bases;
    std::vector<double> weights;          // alpha_b >= 0
    std::vector<SparseState> components;

    std::size_t n_bases() const { return bases.size(); }
    int n_qubits() const { return bases.empty() ? 0 : bases.front().n_qubits; }
    void validate() const;

    std::string to_json() const;
    static MbrState from_json(const std::string& text);
    void save(const std::string& path) const;
    static MbrState load(const std::string& path);
};

// Overlap matrix F_{i_b, j_a} over the flattened (basis, slot) index.
// Blocks may have unequal sizes when component supports differ.
struct GramMatrix {
    Eigen::MatrixXcd entries;
    std::vector<std::pair<int, int>> flat_to_block; // flat index -> (basis, slot)
    std::vector<std::size_t> block_offset;          // per-basis start in the flat index

    std::size_t dim() const { return std::size_t(entries.rows()); }
    std::size_t flat_index(int basis, int slot) const {
        return block_offset[basis] + std::size_t(slot);
    }
    double hermiticity_deviation() const;
    double diagonal_block_deviation() const; // max |diag block - identity|
    double min_eigenvalue() const;
};

// --- assembly and expectation values -------------------------------------

// Sum_b alpha_b U_b |psi_b> as a dense vector; generally unnormalized.
StateVector assemble(const MbrState& m);

GramMatrix gram(const MbrState& m);

// Overlap matrix of the raw frame {U_b |i>, i in supports[b]} with supports
// kept in the given order.
GramMatrix frame_gram(const std::vector<Circuit>& bases,
                      const std::vector<std::vector<std::uint64_t>>& supports);

// F^O_{i_b, j_a} = <i_b| U_b^dag O U_a |j_a>
Eigen::MatrixXcd observable_gram(const MbrState& m, const PauliSum& obs);

// <psi|O|psi> / <psi|psi> from precomputed matrices; O((KB)^2).
double expectation(const MbrState& m, const Eigen::MatrixXcd& obs_gram, const GramMatrix& f);

// --- sparsity ------------------------------------------------------------

// Smallest K whose top-K amplitude mass reaches 1 - eps.
int cb_rank(const StateVector& s, double eps);

struct SparseApprox {
    SparseState state;
    double fidelity = 0.0; // mass retained by the top-K support
};
SparseApprox best_sparse_approx(const StateVector& s, int K);

// The paper's closed-form rank expression for the |0..0> + |+..+> example
// state; reported for comparison only, the cumulative computation above is
// the ground truth.
double psi_plus0_cb_formula(int n, double eps);
StateVector make_psi_plus0(int n);

// --- basis redundancy ----------------------------------------------------

enum class UkMode { exact, heuristic };

// Max overlap achievable between two K-sparse states across the basis
// change u. Exact mode enumerates all support pairs (n <= 5, K <= 3) and
// maximizes the largest singular value of the K x K submatrix; heuristic
// mode greedily picks large entries and reports a lower bound.
double uk_fidelity(const Circuit& u, int K, UkMode mode);

// --- fitting -------------------------------------------------------------

struct FitResult {
    MbrState state;
    double overlap = 0.0;       // |<target|assembled>|
    bool degenerate = false;    // all partial overlaps were zero
};

// Per basis: best K-sparse approximation of U_b^dag |target>, with weights
// alpha_b proportional to the partial overlaps and the assembled state
// normalized.
FitResult fit_weights(const StateVector& target, const std::vector<Circuit>& bases, int K);

// Count of singular values above tol * sigma_max.
int gram_rank(const GramMatrix& f, double tol = 1e-9);

} // namespace mbrlab
