#include "mbrlab/mub.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "mbrlab/qcore.hpp"
#include "mbrlab/special_functions.hpp"

namespace mbrlab {
namespace mub {

namespace {

// ---- GF(2^l) in a self-dual basis ----------------------------------------
//
// Field elements are stored in the polynomial representation; COORDS maps
// them to coordinates over a self-dual basis so that the trace form matches
// the bitwise dot product used by the Pauli symplectic structure.

struct Field {
    int l;
    int size;            // 2^l
    int reduction;       // irreducible polynomial bits above x^l
    std::vector<int> self_dual; // basis elements, poly representation

    int mul(int a, int b) const {
        int acc = 0;
        while (b) {
            if (b & 1) acc ^= a;
            b >>= 1;
            a <<= 1;
            if (a & size) a ^= reduction;
        }
        return acc;
    }
    int trace(int a) const {
        int acc = a;
        int p = a;
        for (int i = 1; i < l; ++i) {
            p = mul(p, p);
            acc ^= p;
        }
        return acc & 1; // trace lands in GF(2)
    }
    // coordinates over the self-dual basis: a_i = tr(a * e_i)
    int coords(int a) const {
        int bits = 0;
        for (int i = 0; i < l; ++i)
            if (trace(mul(a, self_dual[i]))) bits |= 1 << i;
        return bits;
    }
};

Field make_field(int l) {
    switch (l) {
        case 1: return {1, 2, 0b10 /*x*/, {1}};
        case 2: return {2, 4, 0b111 /*x^2+x+1*/, {0b10, 0b11}};            // {w, w^2}
        case 3: return {3, 8, 0b1011 /*x^3+x+1*/, {0b011, 0b111, 0b101}};  // {a^3, a^5, a^6}
        default: throw std::invalid_argument("complete_mub_set: l must be 1, 2 or 3");
    }
}

// ---- symplectic tableau reduction ----------------------------------------
//
// A Pauli on l qubits is a pair of bit rows (x | z); bit i refers to qubit
// i. Gates conjugate rows as:
//   H_q:      swap x_q <-> z_q
//   S_q:      z_q ^= x_q
//   CX_{c,t}: x_t ^= x_c ; z_c ^= z_t
//   CZ_{q,r}: z_q ^= x_r ; z_r ^= x_q
//   SWAP:     swap both coordinates

struct PauliRow {
    unsigned x = 0, z = 0;
};

struct Reducer {
    int l;
    std::vector<PauliRow> rows;
    std::vector<Gate> applied;

    void h(int q) {
        for (auto& r : rows) {
            unsigned xb = (r.x >> q) & 1u, zb = (r.z >> q) & 1u;
            r.x ^= (xb ^ zb) << q;
            r.z ^= (xb ^ zb) << q;
        }
        applied.push_back(Gate::h(q));
    }
    void s(int q) {
        for (auto& r : rows) r.z ^= ((r.x >> q) & 1u) << q;
        applied.push_back(Gate::s(q));
    }
    void cx(int c, int t) {
        for (auto& r : rows) {
            r.x ^= ((r.x >> c) & 1u) << t;
            r.z ^= ((r.z >> t) & 1u) << c;
        }
        applied.push_back(Gate::cx(c, t));
    }
    void cz(int a, int b) {
        for (auto& r : rows) {
            r.z ^= ((r.x >> b) & 1u) << a;
            r.z ^= ((r.x >> a) & 1u) << b;
        }
        applied.push_back(Gate::cz(a, b));
    }
    void swap(int a, int b) {
        for (auto& r : rows) {
            unsigned xa = (r.x >> a) & 1u, xb = (r.x >> b) & 1u;
            unsigned za = (r.z >> a) & 1u, zb = (r.z >> b) & 1u;
            r.x ^= (xa ^ xb) << a;
            r.x ^= (xa ^ xb) << b;
            r.z ^= (za ^ zb) << a;
            r.z ^= (za ^ zb) << b;
        }
        applied.push_back(Gate::swap(a, b));
    }
};

// Find a Clifford circuit U with U Z_j U^dag = +-(generator j). Generators
// must be independent and pairwise commuting.
Circuit clifford_from_z_images(int l, std::vector<PauliRow> gens) {
    Reducer red{l, std::move(gens), {}};
    for (int j = 0; j < l; ++j) {
        if (red.rows[j].x == 0) {
            // pure Z string: lift a bit at or above column j into x so the
            // already-fixed rows Z_0..Z_{j-1} stay untouched
            unsigned hz = red.rows[j].z & ~((1u << j) - 1u);
            if (hz == 0) throw std::logic_error("dependent generator set");
            red.h(std::countr_zero(hz));
        }
        int pivot = std::countr_zero(red.rows[j].x);
        if (pivot < j) throw std::logic_error("generator does not commute with fixed rows");
        // clear remaining x bits with CX out of the pivot
        for (int t = 0; t < l; ++t)
            if (t != pivot && ((red.rows[j].x >> t) & 1u)) red.cx(pivot, t);
        // clear z bits off the pivot
        for (int t = 0; t < l; ++t)
            if (t != pivot && ((red.rows[j].z >> t) & 1u)) red.cz(pivot, t);
        if ((red.rows[j].z >> pivot) & 1u) red.s(pivot);
        red.h(pivot); // X_pivot -> Z_pivot
        if (pivot != j) red.swap(pivot, j);
    }
    for (int j = 0; j < l; ++j)
        if (red.rows[j].x != 0 || red.rows[j].z != (1u << j))
            throw std::logic_error("clifford synthesis failed to reach the Z frame");
    // The applied sequence V maps generators to Z_j; the basis circuit is
    // V^dag so that U Z_j U^dag reproduces the generators.
    Circuit v(l, red.applied);
    return dagger(v);
}

// internal qubit bit q of an l-qubit register <-> coordinate bit; the
// tableau uses bit i = qubit i, while state indices use qubit 0 as the most
// significant bit. PauliRow bit i corresponds to qubit i directly.
PauliRow pauli_from_field(const Field& f, int x_elem, int z_elem) {
    PauliRow r;
    int xc = f.coords(x_elem), zc = f.coords(z_elem);
    for (int i = 0; i < f.l; ++i) {
        if ((xc >> i) & 1) r.x |= 1u << i;
        if ((zc >> i) & 1) r.z |= 1u << i;
    }
    return r;
}

} // namespace

MubFamily complete_mub_set(int l) {
    Field f = make_field(l);
    MubFamily fam;
    fam.n_qubits = l;
    // class at infinity: {(0 | z)} -> computational basis
    fam.bases.push_back(Circuit(l));
    // classes L_lambda = {(x | lambda x)}, generators from the basis elements
    for (int lambda = 0; lambda < f.size; ++lambda) {
        std::vector<PauliRow> gens;
        for (int i = 0; i < l; ++i) {
            int x = f.self_dual[i];
            gens.push_back(pauli_from_field(f, x, f.mul(lambda, x)));
        }
        fam.bases.push_back(clifford_from_z_images(l, gens));
    }
    for (std::size_t a = 0; a < fam.bases.size(); ++a)
        for (std::size_t b = a + 1; b < fam.bases.size(); ++b) {
            VerifyResult r = verify_mub(fam.bases[a], fam.bases[b], 1e-10);
            if (!r.unbiased)
                throw std::logic_error("complete_mub_set: constructed family failed verification");
        }
    fam.pairwise_verified = true;
    return fam;
}

VerifyResult verify_mub(const Circuit& a, const Circuit& b, double tol,
                        std::uint64_t sample_seed) {
    if (a.n_qubits != b.n_qubits) throw std::invalid_argument("verify_mub: qubit-count mismatch");
    const int n = a.n_qubits;
    if (n > kMaxDenseQubits) throw std::invalid_argument("verify_mub: dense cap exceeded");
    const std::uint64_t dim = std::uint64_t(1) << n;
    const double want = 1.0 / double(dim);
    const Circuit a_dag = dagger(a);
    VerifyResult out;
    auto probe_column = [&](std::uint64_t i, bool all_rows, std::uint64_t row) {
        StateVector col = apply_circuit(a_dag, basis_column(b, i));
        if (all_rows) {
            for (std::uint64_t j = 0; j < dim; ++j)
                out.max_deviation =
                    std::max(out.max_deviation, std::abs(std::norm(col.amps[j]) - want));
        } else {
            out.max_deviation =
                std::max(out.max_deviation, std::abs(std::norm(col.amps[row]) - want));
        }
    };
    if (n <= 6) {
        for (std::uint64_t i = 0; i < dim; ++i) probe_column(i, true, 0);
    } else {
        std::mt19937_64 rng(sample_seed);
        std::uniform_int_distribution<std::uint64_t> pick(0, dim - 1);
        for (int trial = 0; trial < 200; ++trial) probe_column(pick(rng), false, pick(rng));
    }
    out.unbiased = out.max_deviation <= tol;
    return out;
}

LocalMubSpec LocalMubSpec::plain(int n, int l, const std::vector<int>& choices) {
    LocalMubSpec spec;
    spec.n_qubits = n;
    spec.block_size = l;
    if (l <= 0 || n % l != 0) throw std::invalid_argument("block size must divide n");
    const int nblocks = n / l;
    if (int(choices.size()) != nblocks)
        throw std::invalid_argument("one basis choice per block required");
    for (int m = 0; m < nblocks; ++m) {
        std::vector<int> block(l);
        std::iota(block.begin(), block.end(), m * l);
        spec.block_assignment.push_back(std::move(block));
        std::vector<int> identity(1 << l);
        std::iota(identity.begin(), identity.end(), 0);
        spec.per_block_permutation.push_back(std::move(identity));
    }
    spec.per_block_basis_choice = choices;
    return spec;
}

void LocalMubSpec::validate(const MubFamily& family) const {
    const int l = block_size;
    if (l <= 0 || n_qubits % l != 0)
        throw std::invalid_argument("local MUB spec: block size must divide n");
    if (family.n_qubits != l)
        throw std::invalid_argument("local MUB spec: family block size mismatch");
    const int nblocks = n_qubits / l;
    if (int(block_assignment.size()) != nblocks ||
        int(per_block_basis_choice.size()) != nblocks ||
        int(per_block_permutation.size()) != nblocks)
        throw std::invalid_argument("local MUB spec: wrong number of blocks");
    std::set<int> seen;
    for (const auto& block : block_assignment) {
        if (int(block.size()) != l)
            throw std::invalid_argument("local MUB spec: block of wrong size");
        for (int q : block) {
            if (q < 0 || q >= n_qubits) throw std::invalid_argument("local MUB spec: bad qubit");
            if (!seen.insert(q).second)
                throw std::invalid_argument("local MUB spec: qubit assigned twice");
        }
    }
    for (int c : per_block_basis_choice)
        if (c < 0 || c >= int(family.bases.size()))
            throw std::invalid_argument("local MUB spec: basis choice out of range");
    for (const auto& perm : per_block_permutation) {
        if (int(perm.size()) != (1 << l))
            throw std::invalid_argument("local MUB spec: permutation of wrong size");
        std::vector<bool> hit(perm.size(), false);
        for (int v : perm) {
            if (v < 0 || v >= int(perm.size()) || hit[v])
                throw std::invalid_argument("local MUB spec: not a permutation");
            hit[v] = true;
        }
    }
}

namespace {

bool is_identity_perm(const std::vector<int>& p) {
    for (int i = 0; i < int(p.size()); ++i)
        if (p[i] != i) return false;
    return true;
}

Gate permutation_gate_1q(int q, const std::vector<int>& p) {
    std::array<cplx, 4> m{};
    for (int col = 0; col < 2; ++col) m[std::size_t(p[col]) * 2 + col] = 1.0;
    return Gate::u1q(q, m);
}

Gate permutation_gate_2q(int q1, int q2, const std::vector<int>& p) {
    std::array<cplx, 16> m{};
    for (int col = 0; col < 4; ++col) m[std::size_t(p[col]) * 4 + col] = 1.0;
    return Gate::u2q(q1, q2, m);
}

} // namespace

Circuit local_mub_basis(const LocalMubSpec& spec, const MubFamily& family) {
    spec.validate(family);
    const int l = spec.block_size;
    Circuit out(spec.n_qubits);
    const int nblocks = spec.n_qubits / l;
    for (int m = 0; m < nblocks; ++m) {
        const std::vector<int>& block = spec.block_assignment[m];
        const Circuit& basis = family.bases[spec.per_block_basis_choice[m]];
        for (const Gate& g : basis.gates) {
            Gate routed = g;
            for (int& t : routed.targets) t = block[t];
            out.gates.push_back(std::move(routed));
        }
        const std::vector<int>& perm = spec.per_block_permutation[m];
        if (is_identity_perm(perm)) continue;
        if (l == 1) {
            out.gates.push_back(permutation_gate_1q(block[0], perm));
        } else if (l == 2) {
            out.gates.push_back(permutation_gate_2q(block[0], block[1], perm));
        } else {
            throw std::invalid_argument(
                "local_mub_basis: non-identity permutations are limited to blocks of 1 or 2 "
                "qubits");
        }
    }
    out.validate();
    return out;
}

std::vector<Circuit> tensor_power_family(const MubFamily& family, int n) {
    const int l = family.n_qubits;
    if (l <= 0 || n % l != 0)
        throw std::invalid_argument("tensor_power_family: block size must divide n");
    std::vector<Circuit> out;
    const int nblocks = n / l;
    for (int k = 0; k < int(family.bases.size()); ++k) {
        LocalMubSpec spec = LocalMubSpec::plain(n, l, std::vector<int>(nblocks, k));
        out.push_back(local_mub_basis(spec, family));
    }
    return out;
}

MubCombinatorics count_mub_combinatorics(int n, int l) {
    if (l <= 0 || n <= 0 || n % l != 0)
        throw std::invalid_argument("count_mub_combinatorics: l must divide n");
    const double blocks = double(n) / l;
    MubCombinatorics out;
    out.log_sets = blocks * log_factorial(std::pow(2.0, l) + 1.0);
    out.log_partitions =
        log_factorial(n) - blocks * log_factorial(l) - log_factorial(blocks);
    out.log_total = out.log_sets + out.log_partitions;
    return out;
}

double c_mkb(int M, int K, int B, int n) {
    if (B > M) throw std::invalid_argument("c_mkb: need B <= M");
    if (n < 0 || n > 62) throw std::invalid_argument("c_mkb: n out of range");
    const double dim = std::pow(2.0, n);
    if (K > dim) throw std::invalid_argument("c_mkb: need K <= 2^n");
    if (K < 0 || B < 0) throw std::invalid_argument("c_mkb: negative arguments");
    return log_binomial(M, B) + double(B) * log_binomial(dim, K);
}

} // namespace mub
} // namespace mbrlab
