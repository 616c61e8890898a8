#include "mbrlab/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace mbrlab {

PauliSum& PauliSum::add(double coeff, const std::string& ops) {
    terms.push_back({coeff, ops});
    return *this;
}

void PauliSum::validate() const {
    for (const PauliTerm& t : terms) {
        if (int(t.ops.size()) != n_qubits)
            throw std::invalid_argument("Pauli string length does not match qubit count");
        if (!std::isfinite(t.coeff)) throw std::invalid_argument("non-finite Pauli coefficient");
        for (char c : t.ops)
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
                throw std::invalid_argument("Pauli string letters must be I, X, Y or Z");
    }
}

PauliSum PauliSum::single(int n, double coeff, const std::string& ops) {
    PauliSum o(n);
    o.add(coeff, ops);
    o.validate();
    return o;
}

PauliSum PauliSum::one_site(int n, double coeff, char p, int qubit) {
    std::string ops(n, 'I');
    ops.at(qubit) = p;
    return single(n, coeff, ops);
}

PauliSum PauliSum::identity(int n, double coeff) {
    return single(n, coeff, std::string(n, 'I'));
}

namespace {

struct TermMasks {
    std::uint64_t xmask = 0, zmask = 0;
    int y_count = 0;
};

TermMasks masks_of(const PauliTerm& t, int n) {
    TermMasks m;
    for (int q = 0; q < n; ++q) {
        std::uint64_t bit = std::uint64_t(1) << (n - 1 - q);
        switch (t.ops[q]) {
            case 'X': m.xmask |= bit; break;
            case 'Z': m.zmask |= bit; break;
            case 'Y':
                m.xmask |= bit;
                m.zmask |= bit;
                ++m.y_count;
                break;
            default: break;
        }
    }
    return m;
}

} // namespace

void apply_pauli_term(const PauliTerm& t, const StateVector& v, StateVector& out, int n) {
    TermMasks m = masks_of(t, n);
    static const cplx iphase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx base = iphase[m.y_count & 3] * t.coeff;
    const std::uint64_t dim = v.dim();
    for (std::uint64_t i = 0; i < dim; ++i) {
        int par = std::popcount(i & m.zmask) & 1;
        out.amps[i ^ m.xmask] += (par ? -base : base) * v.amps[i];
    }
}

void apply_pauli_sum(const PauliSum& o, const StateVector& v, StateVector& out) {
    if (o.n_qubits != v.n_qubits) throw std::invalid_argument("observable size mismatch");
    for (const PauliTerm& t : o.terms) apply_pauli_term(t, v, out, o.n_qubits);
}

StateVector pauli_sum_times(const PauliSum& o, const StateVector& v) {
    StateVector out(v.n_qubits);
    out.amps.assign(v.dim(), cplx(0.0));
    apply_pauli_sum(o, v, out);
    return out;
}

} // namespace mbrlab
