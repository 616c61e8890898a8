#include "mbrlab/qcore.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mbrlab {

namespace {

void apply_1q(const std::array<cplx, 4>& m, int q, StateVector& s) {
    const int n = s.n_qubits;
    const std::uint64_t stride = std::uint64_t(1) << (n - 1 - q);
    const std::uint64_t dim = s.dim();
    for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
        for (std::uint64_t off = 0; off < stride; ++off) {
            std::uint64_t i0 = base + off, i1 = i0 + stride;
            cplx a0 = s.amps[i0], a1 = s.amps[i1];
            s.amps[i0] = m[0] * a0 + m[1] * a1;
            s.amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }
}

void apply_2q(const std::array<cplx, 16>& m, int q1, int q2, StateVector& s) {
    const int n = s.n_qubits;
    const std::uint64_t s1 = std::uint64_t(1) << (n - 1 - q1);
    const std::uint64_t s2 = std::uint64_t(1) << (n - 1 - q2);
    const std::uint64_t dim = s.dim();
    const std::uint64_t mask = s1 | s2;
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & mask) continue; // visit each 4-group once, from its 00 member
        std::uint64_t idx[4] = {i, i + s2, i + s1, i + s1 + s2};
        cplx a[4] = {s.amps[idx[0]], s.amps[idx[1]], s.amps[idx[2]], s.amps[idx[3]]};
        for (int r = 0; r < 4; ++r)
            s.amps[idx[r]] = m[4 * r] * a[0] + m[4 * r + 1] * a[1] + m[4 * r + 2] * a[2] +
                             m[4 * r + 3] * a[3];
    }
}

} // namespace

void apply_gate_inplace(const Gate& g, StateVector& s) {
    const int n = s.n_qubits;
    switch (g.kind) {
        case GateKind::X: {
            const std::uint64_t m = std::uint64_t(1) << (n - 1 - g.targets[0]);
            for (std::uint64_t i = 0; i < s.dim(); ++i)
                if (!(i & m)) std::swap(s.amps[i], s.amps[i | m]);
            return;
        }
        case GateKind::Z: {
            const std::uint64_t m = std::uint64_t(1) << (n - 1 - g.targets[0]);
            for (std::uint64_t i = 0; i < s.dim(); ++i)
                if (i & m) s.amps[i] = -s.amps[i];
            return;
        }
        case GateKind::CX: {
            const std::uint64_t mc = std::uint64_t(1) << (n - 1 - g.targets[0]);
            const std::uint64_t mt = std::uint64_t(1) << (n - 1 - g.targets[1]);
            for (std::uint64_t i = 0; i < s.dim(); ++i)
                if ((i & mc) && !(i & mt)) std::swap(s.amps[i], s.amps[i | mt]);
            return;
        }
        case GateKind::CZ: {
            const std::uint64_t m =
                (std::uint64_t(1) << (n - 1 - g.targets[0])) |
                (std::uint64_t(1) << (n - 1 - g.targets[1]));
            for (std::uint64_t i = 0; i < s.dim(); ++i)
                if ((i & m) == m) s.amps[i] = -s.amps[i];
            return;
        }
        case GateKind::SWAP: {
            const std::uint64_t m1 = std::uint64_t(1) << (n - 1 - g.targets[0]);
            const std::uint64_t m2 = std::uint64_t(1) << (n - 1 - g.targets[1]);
            for (std::uint64_t i = 0; i < s.dim(); ++i)
                if ((i & m1) && !(i & m2)) std::swap(s.amps[i], s.amps[(i ^ m1) | m2]);
            return;
        }
        case GateKind::U2Q:
            apply_2q(g.matrix2q(), g.targets[0], g.targets[1], s);
            return;
        default:
            apply_1q(g.matrix1q(), g.targets[0], s);
            return;
    }
}

void apply_circuit_inplace(const Circuit& c, StateVector& s) {
    if (c.n_qubits != s.n_qubits) throw std::invalid_argument("qubit-count mismatch");
    c.validate();
    for (const Gate& g : c.gates) apply_gate_inplace(g, s);
}

StateVector apply_circuit(const Circuit& c, const StateVector& s) {
    StateVector out = s;
    apply_circuit_inplace(c, out);
    return out;
}

StateVector basis_column(const Circuit& c, std::uint64_t j) {
    StateVector s = StateVector::basis_state(c.n_qubits, j);
    apply_circuit_inplace(c, s);
    return s;
}

double expectation_dense(const StateVector& s, const PauliSum& obs) {
    if (obs.n_qubits != s.n_qubits) throw std::invalid_argument("observable size mismatch");
    obs.validate();
    StateVector tmp = pauli_sum_times(obs, s);
    return inner(s, tmp).real();
}

StateVector haar_random_state(int n, std::uint64_t seed) {
    if (n < 1 || n > kMaxDenseQubits)
        throw std::invalid_argument("haar_random_state: n out of dense range");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector s(n);
    for (cplx& a : s.amps) a = cplx(gauss(rng), gauss(rng));
    s.normalize();
    return s;
}

MatrixXcd dense_unitary(const Circuit& c) {
    if (c.n_qubits > kMaxMatrixQubits)
        throw std::invalid_argument("full-matrix oracle cap exceeded (n <= 8)");
    const std::uint64_t dim = std::uint64_t(1) << c.n_qubits;
    MatrixXcd u(dim, dim);
    for (std::uint64_t j = 0; j < dim; ++j) {
        StateVector col = basis_column(c, j);
        for (std::uint64_t i = 0; i < dim; ++i) u(i, j) = col.amps[i];
    }
    return u;
}

MatrixXcd dense_pauli_sum(const PauliSum& o) {
    if (o.n_qubits > kMaxMatrixQubits)
        throw std::invalid_argument("full-matrix oracle cap exceeded (n <= 8)");
    const std::uint64_t dim = std::uint64_t(1) << o.n_qubits;
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (std::uint64_t j = 0; j < dim; ++j) {
        StateVector col = pauli_sum_times(o, StateVector::basis_state(o.n_qubits, j));
        for (std::uint64_t i = 0; i < dim; ++i) m(i, j) = col.amps[i];
    }
    return m;
}

double unitarity_deviation(const Circuit& c) {
    MatrixXcd u = dense_unitary(c);
    MatrixXcd gram = u.adjoint() * u;
    gram.diagonal().array() -= 1.0;
    return gram.cwiseAbs().maxCoeff();
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    // splitmix64 over the concatenated words
    auto mix = [](std::uint64_t& state) {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    std::uint64_t state = master;
    std::uint64_t out = mix(state);
    state ^= a * 0xff51afd7ed558ccdull;
    out ^= mix(state);
    state ^= b * 0xc4ceb9fe1a85ec53ull;
    out ^= mix(state);
    state ^= c * 0x2545f4914f6cdd1dull;
    out ^= mix(state);
    return out;
}

} // namespace mbrlab
