// Dense n-qubit statevectors. Index i encodes the computational basis
// element with qubit 0 as the most significant bit.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mbrlab {

using cplx = std::complex<double>;

inline constexpr int kMaxDenseQubits = 16; // dense state storage cap
inline constexpr int kMaxMatrixQubits = 8; // full-matrix oracle cap

struct StateVector {
    int n_qubits = 0;
    std::vector<cplx> amps;

    StateVector() = default;
    explicit StateVector(int n); // |0...0>
    StateVector(int n, std::vector<cplx> a);

    static StateVector basis_state(int n, std::uint64_t index);

    std::uint64_t dim() const { return std::uint64_t(1) << n_qubits; }
    double norm2() const;
    double norm() const;
    void normalize();
    bool is_normalized(double tol = 1e-9) const;
};

cplx inner(const StateVector& a, const StateVector& b); // <a|b>
double fidelity(const StateVector& a, const StateVector& b);

inline int bit_of(std::uint64_t index, int qubit, int n) {
    return int((index >> (n - 1 - qubit)) & 1u);
}

} // namespace mbrlab
