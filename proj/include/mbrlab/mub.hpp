// Mutually unbiased bases: complete sets on 1-3 qubits, pairwise
// verification, block-local tensor constructions with permutations, and the
// counting formulas for local-MUB families.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mbrlab/circuit.hpp"

namespace mbrlab {
namespace mub {

struct MubFamily {
    int n_qubits = 0;
    std::vector<Circuit> bases;
    bool pairwise_verified = false;
};

// Complete set of 2^l + 1 bases on l qubits, l in {1, 2, 3}. Built from the
// Desarguesian spread of Pauli classes over GF(2^l) in a self-dual basis;
// each class eigenbasis is synthesized as a Clifford circuit and the family
// is verified exhaustively before it is returned.
MubFamily complete_mub_set(int l);

struct VerifyResult {
    bool unbiased = false;
    double max_deviation = 0.0; // max | |<j|Ua^dag Ub|i>|^2 - 2^-n |
};

// Exhaustive for n <= 6, otherwise 200 seeded (i, j) samples.
VerifyResult verify_mub(const Circuit& a, const Circuit& b, double tol = 1e-9,
                        std::uint64_t sample_seed = 1);

struct LocalMubSpec {
    int n_qubits = 0;
    int block_size = 0;                            // l, must divide n
    std::vector<std::vector<int>> block_assignment; // qubit partition, n/l blocks of l
    std::vector<int> per_block_basis_choice;        // index into the family per block
    std::vector<std::vector<int>> per_block_permutation; // permutation of {0..2^l-1} per block

    static LocalMubSpec plain(int n, int l, const std::vector<int>& choices);
    void validate(const MubFamily& family) const;
};

// Per-block basis circuits routed onto the assigned qubits, followed by
// per-block permutation unitaries (matrix literals; supported for l <= 2,
// identity permutations only for l = 3).
Circuit local_mub_basis(const LocalMubSpec& spec, const MubFamily& family);

// Tensor power of a small family: basis k of `family` applied to every
// block of l adjacent qubits. Outputs are pairwise unbiased on n qubits.
std::vector<Circuit> tensor_power_family(const MubFamily& family, int n);

struct MubCombinatorics {
    double log_sets = 0.0;       // ln ((2^l+1)!)^(n/l)
    double log_partitions = 0.0; // ln n! / (l!^(n/l) (n/l)!)
    double log_total = 0.0;
};
MubCombinatorics count_mub_combinatorics(int n, int l);

// ln C(M,B) + B ln C(2^n, K): the number of MBR configurations drawn from M
// bases with K-sparse components.
double c_mkb(int M, int K, int B, int n);

} // namespace mub
} // namespace mbrlab
