// Dense statevector engine: the brute-force oracle every other module is
// validated against.
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "mbrlab/circuit.hpp"
#include "mbrlab/pauli.hpp"
#include "mbrlab/statevector.hpp"

namespace mbrlab {

using MatrixXcd = Eigen::MatrixXcd;

StateVector apply_circuit(const Circuit& c, const StateVector& s);
void apply_circuit_inplace(const Circuit& c, StateVector& s);
void apply_gate_inplace(const Gate& g, StateVector& s);

// U_c |j>
StateVector basis_column(const Circuit& c, std::uint64_t j);

double expectation_dense(const StateVector& s, const PauliSum& obs);

StateVector haar_random_state(int n, std::uint64_t seed);

// Full 2^n x 2^n matrix of the circuit; n <= kMaxMatrixQubits.
MatrixXcd dense_unitary(const Circuit& c);
MatrixXcd dense_pauli_sum(const PauliSum& o); // n <= kMaxMatrixQubits

// Max |(U^dag U - I)_{ij}|; n <= kMaxMatrixQubits.
double unitarity_deviation(const Circuit& c);

// Deterministic stream splitting: one master seed, many independent draws.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

} // namespace mbrlab
