#include <doctest.h>

#include <cmath>
#include <random>

#include "mbrlab/qcore.hpp"

using namespace mbrlab;

namespace {

Circuit random_circuit(int n, int gates, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    Circuit c(n);
    for (int g = 0; g < gates; ++g) {
        switch (rng() % 5) {
            case 0: c.add(Gate::h(int(rng() % n))); break;
            case 1: c.add(Gate::t(int(rng() % n))); break;
            case 2: c.add(Gate::ry(int(rng() % n), angle(rng))); break;
            case 3: c.add(Gate::rz(int(rng() % n), angle(rng))); break;
            default: {
                int a = int(rng() % n), b = int(rng() % n);
                if (a == b) b = (b + 1) % n;
                c.add(Gate::cx(a, b));
            }
        }
    }
    return c;
}

} // namespace

TEST_CASE("empty circuit is the identity") {
    StateVector s = haar_random_state(3, 7);
    StateVector t = apply_circuit(Circuit(3), s);
    for (std::uint64_t i = 0; i < s.dim(); ++i) CHECK(t.amps[i] == s.amps[i]);
}

TEST_CASE("Hadamard on |0>") {
    StateVector s(1);
    StateVector t = apply_circuit(Circuit(1, {Gate::h(0)}), s);
    CHECK(std::abs(t.amps[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(t.amps[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("two-qubit circuit matches the explicit matrix product") {
    // H (x) H then CX(0,1) applied to |00>, against hand-built 4x4 matrices
    Circuit c(2, {Gate::h(0), Gate::h(1), Gate::cx(0, 1)});
    StateVector got = apply_circuit(c, StateVector(2));

    Eigen::Matrix2cd h1;
    h1 << 1, 1, 1, -1;
    h1 /= std::sqrt(2.0);
    Eigen::Matrix4cd hh = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) hh(2 * i + k, 2 * j + l) = h1(i, j) * h1(k, l);
    Eigen::Matrix4cd cx = Eigen::Matrix4cd::Zero();
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1;
    Eigen::Vector4cd v = cx * hh * Eigen::Vector4cd(1, 0, 0, 0);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(got.amps[std::uint64_t(i)] - v(i)) < 1e-12);
}

TEST_CASE("qubit 0 is the most significant bit") {
    // X on qubit 0 of |00> lands on index 2, not 1
    StateVector t = apply_circuit(Circuit(2, {Gate::x(0)}), StateVector(2));
    CHECK(std::abs(t.amps[2] - 1.0) < 1e-15);
}

TEST_CASE("dagger of fixed gates") {
    CHECK(dagger(Circuit(1, {Gate::h(0)})).gates[0].kind == GateKind::H);
    Gate rz_dag = dagger(Circuit(1, {Gate::rz(0, 0.7)})).gates[0];
    CHECK(rz_dag.kind == GateKind::RZ);
    CHECK(rz_dag.params[0] == -0.7);
}

TEST_CASE("dagger round trip on random circuits") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Circuit c = random_circuit(4, 5, seed);
        StateVector s = haar_random_state(4, 100 + seed);
        StateVector back = apply_circuit(dagger(c), apply_circuit(c, s));
        CHECK(fidelity(back, s) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("unitarity and adjoint identity") {
    Circuit c = random_circuit(5, 12, 42);
    CHECK(unitarity_deviation(c) < 1e-9);
    for (int t = 0; t < 20; ++t) {
        StateVector s = haar_random_state(5, 200 + std::uint64_t(t));
        CHECK(apply_circuit(c, s).norm() == doctest::Approx(1.0).epsilon(1e-9));
    }
    StateVector x = haar_random_state(5, 1), y = haar_random_state(5, 2);
    cplx lhs = inner(apply_circuit(c, x), y);
    cplx rhs = inner(x, apply_circuit(dagger(c), y));
    CHECK(std::abs(lhs - rhs) < 1e-9);
}

TEST_CASE("apply_circuit agrees with the dense-matrix oracle") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const int n = 4;
        Circuit c = random_circuit(n, 8, 50 + seed);
        MatrixXcd u = dense_unitary(c);
        StateVector s = haar_random_state(n, 300 + seed);
        StateVector got = apply_circuit(c, s);
        Eigen::VectorXcd v(s.dim());
        for (std::uint64_t i = 0; i < s.dim(); ++i) v(Eigen::Index(i)) = s.amps[i];
        Eigen::VectorXcd want = u * v;
        for (std::uint64_t i = 0; i < s.dim(); ++i)
            CHECK(std::abs(got.amps[i] - want(Eigen::Index(i))) < 1e-10);
    }
}

TEST_CASE("expectation_dense basics") {
    StateVector zero(1);
    CHECK(expectation_dense(zero, PauliSum::one_site(1, 1.0, 'Z', 0)) == doctest::Approx(1.0));
    StateVector plus = apply_circuit(Circuit(1, {Gate::h(0)}), StateVector(1));
    CHECK(expectation_dense(plus, PauliSum::one_site(1, 1.0, 'X', 0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expectation_dense matches the full-matrix quadratic form") {
    const int n = 3;
    StateVector s = haar_random_state(n, 9);
    PauliSum obs(n);
    obs.add(0.5, "XXI").add(1.2, "IIZ");
    MatrixXcd m = dense_pauli_sum(obs);
    Eigen::VectorXcd v(s.dim());
    for (std::uint64_t i = 0; i < s.dim(); ++i) v(Eigen::Index(i)) = s.amps[i];
    double want = (v.adjoint() * m * v).value().real();
    CHECK(expectation_dense(s, obs) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("Y string phases against the dense oracle") {
    const int n = 2;
    PauliSum obs(n);
    obs.add(0.8, "YY").add(-0.3, "YI");
    StateVector s = haar_random_state(n, 77);
    MatrixXcd m = dense_pauli_sum(obs);
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = s.amps[std::uint64_t(i)];
    CHECK(expectation_dense(s, obs) ==
          doctest::Approx((v.adjoint() * m * v).value().real()).epsilon(1e-10));
}

TEST_CASE("haar_random_state determinism and normalization") {
    StateVector a = haar_random_state(4, 123), b = haar_random_state(4, 123);
    for (std::uint64_t i = 0; i < a.dim(); ++i) CHECK(a.amps[i] == b.amps[i]);
    for (std::uint64_t s = 0; s < 1000; ++s)
        CHECK(std::abs(haar_random_state(2, s).norm() - 1.0) < 1e-12);
}

TEST_CASE("haar moment E|amp_0|^2 = 2^-n") {
    const int n = 4, draws = 100000;
    double acc = 0.0;
    for (int t = 0; t < draws; ++t)
        acc += std::norm(haar_random_state(n, 5000 + std::uint64_t(t)).amps[0]);
    const double mean = acc / draws;
    // Var(|amp|^2) ~ 2^-2n, so 3 standard errors of the mean:
    const double se = std::pow(2.0, -n) / std::sqrt(double(draws));
    CHECK(std::abs(mean - std::pow(2.0, -n)) < 3.0 * se);
}

TEST_CASE("circuit text round trip") {
    Circuit c(3);
    c.add(Gate::h(0)).add(Gate::cx(0, 1)).add(Gate::rz(2, 1.5707963));
    c.add(Gate::u1q(1, {cplx(0, 1), 0, 0, cplx(0, -1)}));
    Circuit back = Circuit::from_text(c.to_text());
    CHECK(back.n_qubits == 3);
    REQUIRE(back.gates.size() == c.gates.size());
    StateVector s = haar_random_state(3, 4);
    CHECK(fidelity(apply_circuit(c, s), apply_circuit(back, s)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("circuit text rejects malformed input") {
    CHECK_THROWS(Circuit::from_text("H 0\n"));                 // missing header
    CHECK_THROWS(Circuit::from_text("qubits 2\nH 5\n"));       // target out of range
    CHECK_THROWS(Circuit::from_text("qubits 2\nFOO 0\n"));     // unknown gate
    CHECK_THROWS(Circuit::from_text("qubits 2\nCX 0 0\n"));    // repeated target
    CHECK_THROWS(Circuit::from_text("qubits 2\nRZ 0\n"));      // missing angle
    CHECK_NOTHROW(Circuit::from_text("qubits 2\n# comment\nCX 0 1\n"));
}

TEST_CASE("qubit-count mismatch raises") {
    CHECK_THROWS(apply_circuit(Circuit(2, {Gate::h(0)}), StateVector(3)));
}

TEST_CASE("non-unitary matrix literals are rejected") {
    CHECK_THROWS(Gate::u1q(0, {1, 0, 0, 2}));
}
