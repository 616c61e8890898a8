// Sums of weighted Pauli strings, the observable class used throughout.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mbrlab/statevector.hpp"

namespace mbrlab {

struct PauliTerm {
    double coeff = 0.0;
    std::string ops; // per-qubit letters in {I,X,Y,Z}, ops[q] acts on qubit q
};

struct PauliSum {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;

    PauliSum() = default;
    explicit PauliSum(int n) : n_qubits(n) {}

    PauliSum& add(double coeff, const std::string& ops);
    void validate() const;

    static PauliSum single(int n, double coeff, const std::string& ops);
    // coeff * P on one qubit, identities elsewhere
    static PauliSum one_site(int n, double coeff, char p, int qubit);
    static PauliSum identity(int n, double coeff = 1.0);
};

// y = P v for a single Pauli string (phases via Y = i X Z)
void apply_pauli_term(const PauliTerm& t, const StateVector& v, StateVector& out, int n);

// y += O v, matrix-free
void apply_pauli_sum(const PauliSum& o, const StateVector& v, StateVector& out);
StateVector pauli_sum_times(const PauliSum& o, const StateVector& v);

} // namespace mbrlab
