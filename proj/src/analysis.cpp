#include "mbrlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mbrlab/parallel.hpp"
#include "mbrlab/qcore.hpp"
#include "mbrlab/special_functions.hpp"

namespace mbrlab {
namespace analysis {

void VolumeQuery::validate() const {
    if (n < 1 || n > 62) throw std::invalid_argument("volume query: bad n");
    const double dim = std::pow(2.0, n);
    if (k < 1 || double(k) > dim) throw std::invalid_argument("volume query: need 1 <= K <= 2^n");
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("volume query: eps in [0, 1]");
}

double sparse_volume_prob(const VolumeQuery& q) {
    q.validate();
    const double dim = std::pow(2.0, q.n);
    if (double(q.k) == dim) return 1.0;
    return reg_inc_beta(q.eps, dim - q.k, q.k);
}

double sparse_volume_prob_shifted(const VolumeQuery& q) {
    q.validate();
    const double dim = std::pow(2.0, q.n);
    if (double(q.k) == dim) return 1.0;
    return reg_inc_beta(q.eps, dim - q.k - 0.5, std::max(0.5, q.k - 0.5));
}

double gaussian_volume_approx(const VolumeQuery& q) {
    q.validate();
    const double dim = std::pow(2.0, q.n);
    const double mean = (dim - q.k) / dim;
    const double var = (dim - q.k) * double(q.k) / ((dim + 1.0) * dim * dim);
    if (var <= 0.0) return q.eps >= mean ? 1.0 : 0.0;
    return normal_cdf(q.eps, mean, var);
}

double hoeffding_volume_bound(const VolumeQuery& q) {
    q.validate();
    const double dim = std::pow(2.0, q.n);
    if (double(q.k) > (1.0 - q.eps) * dim)
        throw std::domain_error("hoeffding bound: needs K <= (1-eps) 2^n");
    const double t = q.eps - (dim - q.k) / dim;
    return std::exp(-dim * t * t);
}

McEstimate haar_volume_mc(const VolumeQuery& q, int trials, std::uint64_t seed, bool maximize) {
    q.validate();
    if (q.n > 12) throw std::invalid_argument("haar_volume_mc: n <= 12");
    if (trials < 1) throw std::invalid_argument("haar_volume_mc: need at least one trial");
    const double goal = 1.0 - q.eps;
    std::vector<unsigned char> hit(std::size_t(trials), 0);
    parallel_for(std::size_t(trials), [&](std::size_t t) {
        StateVector psi = haar_random_state(q.n, derive_seed(seed, std::uint64_t(t)));
        double mass = 0.0;
        if (maximize) {
            std::vector<double> w(psi.dim());
            for (std::uint64_t i = 0; i < psi.dim(); ++i) w[i] = std::norm(psi.amps[i]);
            std::nth_element(w.begin(), w.begin() + (q.k - 1), w.end(), std::greater<double>());
            for (int i = 0; i < q.k; ++i) mass += w[std::size_t(i)];
        } else {
            for (int i = 0; i < q.k; ++i) mass += std::norm(psi.amps[std::uint64_t(i)]);
        }
        hit[t] = mass >= goal ? 1 : 0;
    });
    McEstimate out;
    int hits = 0;
    for (unsigned char h : hit) hits += h;
    out.fraction = double(hits) / trials;
    out.stderr_ = std::sqrt(out.fraction * (1.0 - out.fraction) / trials);
    return out;
}

namespace {

// Largest induced infinity norm (max absolute row sum) over off-diagonal
// blocks of the overlap matrix.
double max_offdiag_block_norm(const GramMatrix& f) {
    double best = 0.0;
    const std::size_t dim = f.dim();
    for (std::size_t i = 0; i < dim; ++i) {
        const int bi = f.flat_to_block[i].first;
        std::vector<double> row_sum_per_block;
        double acc = 0.0;
        int current = -1;
        for (std::size_t j = 0; j < dim; ++j) {
            const int bj = f.flat_to_block[j].first;
            if (bj != current) {
                if (current != -1 && current != bi) best = std::max(best, acc);
                current = bj;
                acc = 0.0;
            }
            acc += std::abs(f.entries(Eigen::Index(i), Eigen::Index(j)));
        }
        if (current != -1 && current != bi) best = std::max(best, acc);
    }
    return best;
}

} // namespace

double lcu_success_bound(const LcuInstance& inst, LcuBoundMode mode) {
    const auto& a = inst.weights;
    if (a.empty()) throw std::invalid_argument("lcu bound: empty weight vector");
    for (double w : a)
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("lcu bound: weights must be finite and nonnegative");
    const double n1 = std::accumulate(a.begin(), a.end(), 0.0);
    if (n1 <= 0.0) throw std::invalid_argument("lcu bound: zero weight vector");
    const double n2sq = std::inner_product(a.begin(), a.end(), a.begin(), 0.0);
    const std::size_t b = a.size();
    double value;
    if (mode == LcuBoundMode::general) {
        const double max_f = b > 1 ? max_offdiag_block_norm(inst.gram) : 0.0;
        value = n2sq / (n1 * n1) * (1.0 - max_f) + max_f;
    } else {
        const double ninf = *std::max_element(a.begin(), a.end());
        const double ratio = double(inst.k) * double(b) / std::sqrt(std::pow(2.0, inst.n));
        value = double(b) * ninf * ninf / (n1 * n1) * (1.0 - ratio) + ratio;
    }
    return std::min(value, 1.0);
}

LcuInstance lcu_instance_of(const MbrState& m, int k) {
    LcuInstance inst;
    inst.weights = m.weights;
    inst.gram = gram(m);
    inst.n = m.n_qubits();
    inst.k = k;
    return inst;
}

double lcu_simulate(const MbrState& m) {
    m.validate();
    const std::size_t b = m.n_bases();
    int anc = 0;
    while ((std::size_t(1) << anc) < b) ++anc;
    if (m.n_qubits() + anc > kMaxDenseQubits)
        throw std::invalid_argument("lcu_simulate: ancilla + system exceeds the dense cap");
    const double n1 = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    if (n1 <= 0.0) throw std::invalid_argument("lcu_simulate: zero weight vector");
    // post-select amplitudes <0|W^dag (sum_b sqrt(alpha_b / |alpha|_1) |b> U_b|psi_b>)
    StateVector acc(m.n_qubits());
    acc.amps.assign(acc.dim(), cplx(0.0));
    for (std::size_t bb = 0; bb < b; ++bb) {
        StateVector comp = apply_circuit(m.bases[bb], m.components[bb].dense());
        const double w = m.weights[bb] / n1; // sqrt(alpha/|a|1) * sqrt(alpha/|a|1)
        for (std::uint64_t i = 0; i < acc.dim(); ++i) acc.amps[i] += w * comp.amps[i];
    }
    return acc.norm2();
}

DepthBounds depth_bounds(const DepthParams& p) {
    if (p.n < 1 || p.k < 1 || p.b < 1) throw std::invalid_argument("depth bounds: bad n/K/B");
    if (!(p.eps > 0.0)) throw std::domain_error("depth bounds: log of nonpositive argument");
    if (!(p.delta > 0.0)) throw std::domain_error("depth bounds: log of nonpositive argument");
    if (p.delta > 0.1) throw std::invalid_argument("depth bounds: delta must be <= 0.1");
    if (p.alpha.empty()) throw std::invalid_argument("depth bounds: empty alpha");
    const double kb = double(p.k) * double(p.b);
    const double log_inv_eps = std::log(1.0 / p.eps);
    DepthBounds out;
    if (kb <= 1.0) {
        // a single basis element needs no superposition loading
        out.m_lower = double(p.n);
        out.d_lower = double(p.n);
    } else {
        out.m_lower = kb * log_inv_eps / std::log(std::log(kb)) + p.n;
        out.d_lower = kb * log_inv_eps / (std::log(kb) * std::log(std::log(kb))) + p.n;
    }
    const double n1 = std::accumulate(p.alpha.begin(), p.alpha.end(), 0.0);
    const double n2sq = std::inner_product(p.alpha.begin(), p.alpha.end(), p.alpha.begin(), 0.0);
    if (n2sq <= 0.0) throw std::invalid_argument("depth bounds: zero alpha");
    const double ratio = n1 * n1 / n2sq;
    const double max_f = p.b > 1 ? p.max_f : 0.0;
    out.d_upper = p.d_w + 2.0 * (p.d_u + p.d_k) * std::sqrt(double(p.b)) *
                              std::log(2.0 / p.delta) * ratio *
                              (1.0 - 0.5 * max_f * (ratio + 1.0));
    return out;
}

ChopResult chop_probability(const Circuit& u1, const Circuit& u2, const Circuit& reducer,
                            std::uint64_t x, int k) {
    const int n = u1.n_qubits;
    if (u2.n_qubits != n || reducer.n_qubits != n)
        throw std::invalid_argument("chop_probability: qubit-count mismatch");
    if (n > kMaxDenseQubits) throw std::invalid_argument("chop_probability: dense cap");
    StateVector mid = apply_circuit(u1, StateVector(n));
    if (x >= mid.dim()) throw std::invalid_argument("chop_probability: x out of range");
    StateVector full = apply_circuit(u2, mid);
    ChopResult out;
    out.p_exact = std::norm(full.amps[x]);

    StateVector w = apply_circuit(reducer, mid); // R U1 |0>
    SparseApprox top = best_sparse_approx(w, k);
    out.trunc_fidelity = top.fidelity;
    // <x| U2 R^dag |i> = conj( (R U2^dag |x>)_i )
    StateVector y = apply_circuit(reducer, apply_circuit(dagger(u2), StateVector::basis_state(n, x)));
    cplx amp = 0.0;
    for (std::uint64_t i : top.state.support) amp += std::conj(y.amps[i]) * w.amps[i];
    out.p_approx = std::norm(amp);
    return out;
}

} // namespace analysis
} // namespace mbrlab
