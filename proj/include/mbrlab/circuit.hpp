// Gate-list circuits: the unitaries that specify bases.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace mbrlab {

using cplx = std::complex<double>;

enum class GateKind { H, X, Y, Z, S, T, CX, CZ, SWAP, RX, RY, RZ, U1Q, U2Q };

const char* gate_name(GateKind k);

struct Gate {
    GateKind kind;
    std::vector<int> targets;   // qubit indices, 0-based, qubit 0 is the most significant bit
    std::vector<double> params; // rotation angle, or row-major (re,im) pairs for U1Q/U2Q

    static Gate h(int q) { return {GateKind::H, {q}, {}}; }
    static Gate x(int q) { return {GateKind::X, {q}, {}}; }
    static Gate y(int q) { return {GateKind::Y, {q}, {}}; }
    static Gate z(int q) { return {GateKind::Z, {q}, {}}; }
    static Gate s(int q) { return {GateKind::S, {q}, {}}; }
    static Gate t(int q) { return {GateKind::T, {q}, {}}; }
    static Gate cx(int c, int t) { return {GateKind::CX, {c, t}, {}}; }
    static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, {}}; }
    static Gate swap(int a, int b) { return {GateKind::SWAP, {a, b}, {}}; }
    static Gate rx(int q, double th) { return {GateKind::RX, {q}, {th}}; }
    static Gate ry(int q, double th) { return {GateKind::RY, {q}, {th}}; }
    static Gate rz(int q, double th) { return {GateKind::RZ, {q}, {th}}; }
    static Gate u1q(int q, const std::array<cplx, 4>& m);
    static Gate u2q(int q1, int q2, const std::array<cplx, 16>& m);

    int arity() const;
    std::array<cplx, 4> matrix1q() const;   // for single-qubit kinds
    std::array<cplx, 16> matrix2q() const;  // for two-qubit kinds
    Gate dagger() const;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n) : n_qubits(n) {}
    Circuit(int n, std::vector<Gate> gs) : n_qubits(n), gates(std::move(gs)) { validate(); }

    Circuit& add(Gate g) {
        gates.push_back(std::move(g));
        return *this;
    }
    void validate() const; // throws std::invalid_argument on malformed gates

    // One gate per line, preceded by a "qubits N" header. '#' starts a comment.
    std::string to_text() const;
    static Circuit from_text(const std::string& text);
};

Circuit dagger(const Circuit& c);

// n-fold tensor power of a single-qubit gate sequence, e.g. H on every qubit.
Circuit tensor_each_qubit(int n, GateKind kind);

} // namespace mbrlab
