#include "mbrlab/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace mbrlab {

StateVector::StateVector(int n) : n_qubits(n) {
    if (n < 0 || n > kMaxDenseQubits)
        throw std::invalid_argument("dense statevector cap exceeded (n <= 16)");
    amps.assign(std::uint64_t(1) << n, cplx(0.0));
    amps[0] = 1.0;
}

StateVector::StateVector(int n, std::vector<cplx> a) : n_qubits(n), amps(std::move(a)) {
    if (n < 0 || n > kMaxDenseQubits)
        throw std::invalid_argument("dense statevector cap exceeded (n <= 16)");
    if (amps.size() != (std::uint64_t(1) << n))
        throw std::invalid_argument("amplitude count does not match qubit count");
}

StateVector StateVector::basis_state(int n, std::uint64_t index) {
    StateVector s(n);
    if (index >= s.dim()) throw std::invalid_argument("basis index out of range");
    s.amps[0] = 0.0;
    s.amps[index] = 1.0;
    return s;
}

double StateVector::norm2() const {
    double acc = 0.0;
    for (const cplx& a : amps) acc += std::norm(a);
    return acc;
}

double StateVector::norm() const { return std::sqrt(norm2()); }

void StateVector::normalize() {
    double nrm = norm();
    if (nrm <= 0.0) throw std::domain_error("cannot normalize the zero vector");
    for (cplx& a : amps) a /= nrm;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.n_qubits != b.n_qubits) throw std::invalid_argument("qubit-count mismatch");
    cplx acc = 0.0;
    for (std::uint64_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

} // namespace mbrlab
