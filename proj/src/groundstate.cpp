#include "mbrlab/groundstate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mbrlab/qcore.hpp"

namespace mbrlab {
namespace groundstate {

void GraphSpec::validate() const {
    if (n_nodes <= 0) throw std::invalid_argument("graph: need at least one node");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (u >= v) throw std::invalid_argument("graph: edges must satisfy u < v");
        if (!seen.insert({u, v}).second) throw std::invalid_argument("graph: duplicate edge");
    }
}

std::string GraphSpec::to_text() const {
    std::ostringstream os;
    os << "nodes " << n_nodes << "\n";
    for (auto [u, v] : edges) os << u << ' ' << v << "\n";
    return os.str();
}

GraphSpec GraphSpec::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    GraphSpec g;
    bool have_header = false;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (!have_header) {
            std::string tok;
            if (!(ls >> tok)) continue;
            if (tok != "nodes") throw std::invalid_argument("graph file: expected 'nodes N'");
            if (!(ls >> g.n_nodes)) throw std::invalid_argument("graph file: bad node count");
            have_header = true;
            continue;
        }
        int u, v;
        if (!(ls >> u)) continue;
        if (!(ls >> v)) throw std::invalid_argument("graph file: dangling edge endpoint");
        if (u > v) std::swap(u, v);
        g.edges.emplace_back(u, v);
    }
    if (!have_header) throw std::invalid_argument("graph file: missing 'nodes N' header");
    g.validate();
    return g;
}

GraphSpec GraphSpec::square_lattice(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("lattice: bad shape");
    GraphSpec g;
    g.n_nodes = rows * cols;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int u = r * cols + c;
            if (c + 1 < cols) g.edges.emplace_back(u, u + 1);
            if (r + 1 < rows) g.edges.emplace_back(u, u + cols);
        }
    g.validate();
    return g;
}

PauliSum HamiltonianDecomposition::total() const {
    PauliSum h(n_qubits);
    for (const HamiltonianTerm& t : terms)
        for (const PauliTerm& p : t.op.terms) h.terms.push_back(p);
    return h;
}

HamiltonianDecomposition tfim(const GraphSpec& graph, double J, double h) {
    graph.validate();
    const int n = graph.n_nodes;
    if (n > 20) throw std::invalid_argument("tfim: n <= 20");
    HamiltonianDecomposition decomp;
    decomp.n_qubits = n;

    PauliSum xx(n);
    for (auto [u, v] : graph.edges) {
        std::string ops(n, 'I');
        ops[u] = 'X';
        ops[v] = 'X';
        xx.add(J, ops);
    }
    auto edges = graph.edges;
    decomp.terms.push_back(
        {xx, tensor_each_qubit(n, GateKind::H), [edges, J, n](std::uint64_t idx) {
             double e = 0.0;
             for (auto [u, v] : edges) {
                 int su = 1 - 2 * bit_of(idx, u, n);
                 int sv = 1 - 2 * bit_of(idx, v, n);
                 e += double(su * sv);
             }
             return J * e;
         }});

    PauliSum zsum(n);
    for (int q = 0; q < n; ++q) zsum.add(h, std::string(n, 'I').replace(q, 1, "Z"));
    decomp.terms.push_back({zsum, Circuit(n), [h, n](std::uint64_t idx) {
                                return h * (n - 2.0 * std::popcount(idx));
                            }});
    return decomp;
}

double decomposition_deviation(const HamiltonianDecomposition& decomp) {
    if (decomp.n_qubits > kMaxMatrixQubits)
        throw std::invalid_argument("decomposition_deviation: dense cap exceeded");
    double dev = 0.0;
    for (const HamiltonianTerm& t : decomp.terms) {
        MatrixXcd u = dense_unitary(t.diagonalizer);
        MatrixXcd d = u.adjoint() * dense_pauli_sum(t.op) * u;
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            for (Eigen::Index j = 0; j < d.cols(); ++j) {
                if (i == j)
                    dev = std::max(dev, std::abs(d(i, j) - t.diagonal_energy(std::uint64_t(i))));
                else
                    dev = std::max(dev, std::abs(d(i, j)));
            }
    }
    return dev;
}

namespace {

std::vector<std::uint64_t> brute_force_minimizers(
    const std::function<double(std::uint64_t)>& energy, int n) {
    const std::uint64_t dim = std::uint64_t(1) << n;
    double best = energy(0);
    std::vector<std::uint64_t> mins{0};
    for (std::uint64_t i = 1; i < dim; ++i) {
        double e = energy(i);
        if (e < best - 1e-12) {
            best = e;
            mins.assign(1, i);
        } else if (e <= best + 1e-12 && int(mins.size()) < kMaxSeedDegeneracy) {
            mins.push_back(i);
        }
    }
    return mins;
}

std::uint64_t checkerboard_index(int rows, int cols, int parity) {
    const int n = rows * cols;
    std::uint64_t idx = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (((r + c) & 1) == parity) idx |= std::uint64_t(1) << (n - 1 - (r * cols + c));
    return idx;
}

} // namespace

std::vector<std::vector<std::uint64_t>> seed_supports(
    const HamiltonianDecomposition& decomp, SeedStrategy strategy,
    std::optional<std::pair<int, int>> lattice_shape) {
    const int n = decomp.n_qubits;
    std::vector<std::vector<std::uint64_t>> out;
    if (strategy == SeedStrategy::brute_force) {
        if (n > 22) throw std::invalid_argument("seed_supports: brute force capped at n <= 22");
        for (const HamiltonianTerm& t : decomp.terms)
            out.push_back(brute_force_minimizers(t.diagonal_energy, n));
        return out;
    }
    if (!lattice_shape)
        throw std::invalid_argument("seed_supports: lattice_pattern needs the lattice shape");
    auto [rows, cols] = *lattice_shape;
    if (rows * cols != n) throw std::invalid_argument("seed_supports: shape does not match n");
    const std::uint64_t all_ones = (std::uint64_t(1) << n) - 1;
    for (const HamiltonianTerm& t : decomp.terms) {
        // classify the term by the sign structure of its diagonal pattern
        double e_zero = t.diagonal_energy(0);
        double e_cb = t.diagonal_energy(checkerboard_index(rows, cols, 1));
        double e_ones = t.diagonal_energy(all_ones);
        double best = std::min({e_zero, e_cb, e_ones});
        std::vector<std::uint64_t> seeds;
        if (e_zero <= best + 1e-12) seeds.push_back(0);
        if (e_ones <= best + 1e-12 && all_ones != 0) seeds.push_back(all_ones);
        if (e_cb <= best + 1e-12) {
            seeds.push_back(checkerboard_index(rows, cols, 1));
            seeds.push_back(checkerboard_index(rows, cols, 0));
        }
        std::sort(seeds.begin(), seeds.end());
        seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
        out.push_back(std::move(seeds));
    }
    return out;
}

BallResult hamming_ball(const std::vector<std::uint64_t>& seeds, int n, int radius,
                        std::size_t cap) {
    if (cap < seeds.size()) throw std::invalid_argument("hamming_ball: cap below seed count");
    std::set<std::uint64_t> current(seeds.begin(), seeds.end());
    std::set<std::uint64_t> frontier = current;
    for (int r = 0; r < radius; ++r) {
        std::set<std::uint64_t> next;
        for (std::uint64_t s : frontier)
            for (int q = 0; q < n; ++q) {
                std::uint64_t flipped = s ^ (std::uint64_t(1) << q);
                if (!current.count(flipped)) next.insert(flipped);
            }
        current.insert(next.begin(), next.end());
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    BallResult out;
    out.indices.assign(current.begin(), current.end());
    if (out.indices.size() > cap) {
        out.indices.resize(cap);
        out.truncated = true;
    }
    return out;
}

void SubspaceSelection::validate(int n_qubits) const {
    const std::uint64_t dim = std::uint64_t(1) << n_qubits;
    for (const auto& sup : supports) {
        std::set<std::uint64_t> seen;
        for (std::uint64_t i : sup) {
            if (i >= dim) throw std::invalid_argument("subspace: index out of range");
            if (!seen.insert(i).second)
                throw std::invalid_argument("subspace: duplicate index within a basis");
        }
    }
}

std::size_t SubspaceSelection::total_dim() const {
    std::size_t d = 0;
    for (const auto& s : supports) d += s.size();
    return d;
}

namespace {

// Per-term truncated matrices plus the overlap matrix; the caller combines
// terms with its own coefficients.
struct TruncatedTerms {
    std::vector<Eigen::MatrixXcd> term_mats;
    Eigen::MatrixXcd f_mat;
};

TruncatedTerms truncated_terms(const HamiltonianDecomposition& decomp,
                               const std::vector<Circuit>& bases,
                               const SubspaceSelection& selection) {
    const int n = decomp.n_qubits;
    if (n > kMaxDenseQubits) throw std::invalid_argument("truncated_hamiltonian: dense cap");
    if (bases.size() != selection.supports.size())
        throw std::invalid_argument("truncated_hamiltonian: bases/supports mismatch");
    selection.validate(n);
    std::vector<Circuit> dagger_bases;
    for (const Circuit& b : bases) {
        if (b.n_qubits != n)
            throw std::invalid_argument("truncated_hamiltonian: basis qubit mismatch");
        dagger_bases.push_back(dagger(b));
    }
    const std::size_t dim = selection.total_dim();
    if (dim == 0) throw std::invalid_argument("truncated_hamiltonian: empty subspace");
    TruncatedTerms out;
    out.f_mat.resize(dim, dim);
    for (std::size_t c = 0; c < decomp.terms.size(); ++c)
        out.term_mats.emplace_back(dim, dim);

    std::size_t col = 0;
    for (std::size_t a = 0; a < bases.size(); ++a) {
        for (std::uint64_t j : selection.supports[a]) {
            StateVector v = basis_column(bases[a], j);
            // overlap column: read entries of U_b^dag v on each support
            std::size_t row = 0;
            for (std::size_t b = 0; b < bases.size(); ++b) {
                StateVector w = apply_circuit(dagger_bases[b], v);
                for (std::uint64_t i : selection.supports[b]) out.f_mat(row++, col) = w.amps[i];
            }
            // one column per Hamiltonian term
            for (std::size_t c = 0; c < decomp.terms.size(); ++c) {
                StateVector hv = pauli_sum_times(decomp.terms[c].op, v);
                row = 0;
                for (std::size_t b = 0; b < bases.size(); ++b) {
                    StateVector w = apply_circuit(dagger_bases[b], hv);
                    for (std::uint64_t i : selection.supports[b])
                        out.term_mats[c](row++, col) = w.amps[i];
                }
            }
            ++col;
        }
    }
    return out;
}

} // namespace

TruncatedProblem truncated_hamiltonian(const HamiltonianDecomposition& decomp,
                                       const std::vector<Circuit>& bases,
                                       const SubspaceSelection& selection) {
    TruncatedTerms terms = truncated_terms(decomp, bases, selection);
    TruncatedProblem out;
    out.f_mat = std::move(terms.f_mat);
    out.h_mat = Eigen::MatrixXcd::Zero(out.f_mat.rows(), out.f_mat.cols());
    for (const auto& m : terms.term_mats) out.h_mat += m;
    return out;
}

GepResult solve_gep(const Eigen::MatrixXcd& h_mat, const Eigen::MatrixXcd& f_mat,
                    double cutoff) {
    if (h_mat.rows() != h_mat.cols() || f_mat.rows() != f_mat.cols() ||
        h_mat.rows() != f_mat.rows())
        throw std::invalid_argument("solve_gep: dimension mismatch");
    if ((h_mat - h_mat.adjoint()).cwiseAbs().maxCoeff() > 1e-6)
        throw std::invalid_argument("solve_gep: H is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> fes(0.5 * (f_mat + f_mat.adjoint()));
    const Eigen::VectorXd evals = fes.eigenvalues();
    const double lambda_max = evals.maxCoeff();
    if (lambda_max <= 0.0) throw std::domain_error("solve_gep: overlap matrix is zero");
    std::vector<int> keep;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals(i) > cutoff * lambda_max) keep.push_back(int(i));
    if (keep.empty()) throw std::domain_error("solve_gep: overlap matrix numerically zero");
    Eigen::MatrixXcd t(f_mat.rows(), keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k)
        t.col(k) = fes.eigenvectors().col(keep[k]) / std::sqrt(evals(keep[k]));
    Eigen::MatrixXcd h_white = t.adjoint() * h_mat * t;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hes(0.5 * (h_white + h_white.adjoint()));
    Eigen::Index argmin = 0;
    hes.eigenvalues().minCoeff(&argmin);
    GepResult out;
    out.e0 = hes.eigenvalues()(argmin);
    out.coeffs = t * hes.eigenvectors().col(argmin);
    out.effective_dim = int(keep.size());
    return out;
}

double exact_ground_energy(const HamiltonianDecomposition& decomp) {
    const int n = decomp.n_qubits;
    PauliSum h = decomp.total();
    if (n <= 14) {
        const std::uint64_t dim = std::uint64_t(1) << n;
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
        for (std::uint64_t j = 0; j < dim; ++j) {
            StateVector col = pauli_sum_times(h, StateVector::basis_state(n, j));
            for (std::uint64_t i = 0; i < dim; ++i) mat(i, j) = col.amps[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (mat + mat.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
    if (n <= 20) return lanczos_ground_energy(h, n);
    throw std::invalid_argument("exact_ground_energy: n <= 20");
}

PipelineResult mbr_ground_pipeline(const GraphSpec& graph, double J, double h, int radius,
                                   std::size_t cap) {
    std::vector<SweepRow> rows = sweep(graph, J, h, h, 1, radius, cap);
    PipelineResult out;
    out.e_mbr = rows[0].e_mbr;
    out.e_exact = rows[0].e_exact;
    out.subspace_dim = rows[0].subspace_dim;
    out.gap = out.e_mbr - out.e_exact;
    return out;
}

std::vector<std::vector<SweepRow>> sweep_radii(const GraphSpec& graph, double J, double h_min,
                                               double h_max, int h_steps,
                                               const std::vector<int>& radii, std::size_t cap) {
    if (h_steps < 1) throw std::invalid_argument("sweep: need at least one grid point");
    graph.validate();
    const int n = graph.n_nodes;
    std::vector<double> grid;
    for (int k = 0; k < h_steps; ++k)
        grid.push_back(h_steps == 1 ? h_min
                                    : h_min + (h_max - h_min) * double(k) / (h_steps - 1));

    std::vector<double> exact;
    for (double h : grid) exact.push_back(exact_ground_energy(tfim(graph, J, h)));

    std::vector<std::vector<SweepRow>> all;
    for (int radius : radii) {
        std::vector<SweepRow> rows;
        // seeds change only with the signs of (J, h); cache the truncated
        // matrices per support family
        std::map<std::vector<std::vector<std::uint64_t>>, TruncatedTerms> cache;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double h = grid[k];
            HamiltonianDecomposition decomp = tfim(graph, J, h);
            auto seeds = seed_supports(decomp, SeedStrategy::brute_force);
            SubspaceSelection sel;
            std::vector<Circuit> bases;
            for (std::size_t c = 0; c < decomp.terms.size(); ++c) {
                BallResult ball = hamming_ball(seeds[c], n, radius, cap);
                sel.supports.push_back(std::move(ball.indices));
                bases.push_back(decomp.terms[c].diagonalizer);
            }
            auto it = cache.find(sel.supports);
            if (it == cache.end()) {
                // unit-coefficient matrices, scaled per grid point below
                HamiltonianDecomposition unit_terms = tfim(graph, 1.0, 1.0);
                it = cache.emplace(sel.supports, truncated_terms(unit_terms, bases, sel)).first;
            }
            const TruncatedTerms& tt = it->second;
            Eigen::MatrixXcd h_mat = J * tt.term_mats[0] + h * tt.term_mats[1];
            GepResult gep = solve_gep(h_mat, tt.f_mat);
            SweepRow row;
            row.h = h;
            row.J = J;
            row.radius = radius;
            row.subspace_dim = sel.total_dim();
            row.e_mbr = gep.e0;
            row.e_exact = exact[k];
            row.abs_gap = std::abs(row.e_mbr - row.e_exact);
            rows.push_back(row);
        }
        all.push_back(std::move(rows));
    }
    return all;
}

std::vector<SweepRow> sweep(const GraphSpec& graph, double J, double h_min, double h_max,
                            int h_steps, int radius, std::size_t cap) {
    return sweep_radii(graph, J, h_min, h_max, h_steps, {radius}, cap)[0];
}

} // namespace groundstate
} // namespace mbrlab
