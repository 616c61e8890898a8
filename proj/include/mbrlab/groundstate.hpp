// Ground-state approximation by physics-informed subspace expansion:
// decomposable Hamiltonians, seed selection, Hamming-ball supports, the
// truncated generalized eigenproblem and exact baselines.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbrlab/circuit.hpp"
#include "mbrlab/pauli.hpp"

namespace mbrlab {
namespace groundstate {

struct GraphSpec {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges; // u < v, no duplicates

    void validate() const;
    std::string to_text() const; // "nodes N" then "u v" per line
    static GraphSpec from_text(const std::string& text);
    static GraphSpec square_lattice(int rows, int cols); // open boundary
};

struct HamiltonianTerm {
    PauliSum op;
    Circuit diagonalizer; // U_c with U_c^dag op U_c diagonal
    std::function<double(std::uint64_t)> diagonal_energy;
};

struct HamiltonianDecomposition {
    int n_qubits = 0;
    std::vector<HamiltonianTerm> terms;

    PauliSum total() const;
};

// J sum_{(i,j) in E} X_i X_j  +  h sum_i Z_i, with the XX term diagonal in
// the Hadamard basis and the Z term diagonal in the computational basis.
HamiltonianDecomposition tfim(const GraphSpec& graph, double J, double h);

// Max off-diagonal magnitude of U_c^dag op U_c and energy mismatch; dense,
// n <= 8. Used to validate decompositions.
double decomposition_deviation(const HamiltonianDecomposition& decomp);

enum class SeedStrategy { brute_force, lattice_pattern };
inline constexpr int kMaxSeedDegeneracy = 64;

// Per-term minimizers of the diagonal energy, at most kMaxSeedDegeneracy of
// them, lowest index first. lattice_pattern needs the lattice shape and
// emits checkerboard / uniform patterns without enumeration.
std::vector<std::vector<std::uint64_t>> seed_supports(
    const HamiltonianDecomposition& decomp, SeedStrategy strategy,
    std::optional<std::pair<int, int>> lattice_shape = std::nullopt);

struct BallResult {
    std::vector<std::uint64_t> indices; // sorted, deduplicated
    bool truncated = false;
};
BallResult hamming_ball(const std::vector<std::uint64_t>& seeds, int n, int radius,
                        std::size_t cap);

struct SubspaceSelection {
    std::vector<std::vector<std::uint64_t>> supports; // one list per basis/term
    void validate(int n_qubits) const;                // distinct indices per basis
    std::size_t total_dim() const;
};

struct TruncatedProblem {
    Eigen::MatrixXcd h_mat;
    Eigen::MatrixXcd f_mat;
};

// H_{(b,i),(a,j)} = sum_c <i_b| U_b^dag h_c U_a |j_a> and the matching
// overlap matrix, over the flattened (basis, slot) index.
TruncatedProblem truncated_hamiltonian(const HamiltonianDecomposition& decomp,
                                       const std::vector<Circuit>& bases,
                                       const SubspaceSelection& selection);

struct GepResult {
    double e0 = 0.0;
    Eigen::VectorXcd coeffs;
    int effective_dim = 0;
};

// Whiten by the eigendecomposition of F, discarding eigenvalues below
// cutoff * lambda_max (the pseudo-inverse route), then solve the standard
// Hermitian problem in the whitened frame.
GepResult solve_gep(const Eigen::MatrixXcd& h_mat, const Eigen::MatrixXcd& f_mat,
                    double cutoff = 1e-10);

// Dense for n <= 14, Lanczos with matrix-free matvec for 14 < n <= 20.
double exact_ground_energy(const HamiltonianDecomposition& decomp);

// Lowest eigenvalue of a PauliSum via restarted Lanczos; tol on the
// residual norm. Throws on non-convergence.
double lanczos_ground_energy(const PauliSum& h, int n_qubits, double tol = 1e-8,
                             int max_restarts = 400);

struct PipelineResult {
    double e_mbr = 0.0;
    double e_exact = 0.0;
    std::size_t subspace_dim = 0;
    double gap = 0.0; // e_mbr - e_exact
};

PipelineResult mbr_ground_pipeline(const GraphSpec& graph, double J, double h, int radius,
                                   std::size_t cap = 4096);

struct SweepRow {
    double h = 0.0, J = 0.0;
    int radius = 0;
    std::size_t subspace_dim = 0;
    double e_mbr = 0.0, e_exact = 0.0, abs_gap = 0.0;
};

// h-sweep at fixed J and radius; reuses the per-term truncated matrices
// whenever the seeds do not change between grid points.
std::vector<SweepRow> sweep(const GraphSpec& graph, double J, double h_min, double h_max,
                            int h_steps, int radius, std::size_t cap = 4096);

// Same grid evaluated at several radii with the exact baseline computed once.
std::vector<std::vector<SweepRow>> sweep_radii(const GraphSpec& graph, double J, double h_min,
                                               double h_max, int h_steps,
                                               const std::vector<int>& radii,
                                               std::size_t cap = 4096);

} // namespace groundstate
} // namespace mbrlab
