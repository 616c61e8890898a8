#include "mbrlab/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mbrlab {

namespace {

constexpr double kUnitaryTol = 1e-10;
const cplx kI{0.0, 1.0};

struct KindInfo {
    const char* name;
    int arity;
    int n_params; // -1 marks angle/matrix handled separately
};

const std::map<GateKind, KindInfo>& kind_table() {
    static const std::map<GateKind, KindInfo> table = {
        {GateKind::H, {"H", 1, 0}},      {GateKind::X, {"X", 1, 0}},
        {GateKind::Y, {"Y", 1, 0}},      {GateKind::Z, {"Z", 1, 0}},
        {GateKind::S, {"S", 1, 0}},      {GateKind::T, {"T", 1, 0}},
        {GateKind::CX, {"CX", 2, 0}},    {GateKind::CZ, {"CZ", 2, 0}},
        {GateKind::SWAP, {"SWAP", 2, 0}},{GateKind::RX, {"RX", 1, 1}},
        {GateKind::RY, {"RY", 1, 1}},    {GateKind::RZ, {"RZ", 1, 1}},
        {GateKind::U1Q, {"U1Q", 1, 8}},  {GateKind::U2Q, {"U2Q", 2, 32}},
    };
    return table;
}

template <std::size_t N>
void check_unitary(const std::array<cplx, N>& m, int d, const char* what) {
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < d; ++k) acc += std::conj(m[k * d + i]) * m[k * d + j];
            cplx want = (i == j) ? cplx(1.0) : cplx(0.0);
            if (std::abs(acc - want) > kUnitaryTol)
                throw std::invalid_argument(std::string(what) + " matrix is not unitary");
        }
    }
}

} // namespace

const char* gate_name(GateKind k) { return kind_table().at(k).name; }

Gate Gate::u1q(int q, const std::array<cplx, 4>& m) {
    check_unitary(m, 2, "U1Q");
    Gate g{GateKind::U1Q, {q}, {}};
    for (const cplx& v : m) {
        g.params.push_back(v.real());
        g.params.push_back(v.imag());
    }
    return g;
}

Gate Gate::u2q(int q1, int q2, const std::array<cplx, 16>& m) {
    check_unitary(m, 4, "U2Q");
    Gate g{GateKind::U2Q, {q1, q2}, {}};
    for (const cplx& v : m) {
        g.params.push_back(v.real());
        g.params.push_back(v.imag());
    }
    return g;
}

int Gate::arity() const { return kind_table().at(kind).arity; }

std::array<cplx, 4> Gate::matrix1q() const {
    const double is2 = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case GateKind::H: return {is2, is2, is2, -is2};
        case GateKind::X: return {0, 1, 1, 0};
        case GateKind::Y: return {0, -kI, kI, 0};
        case GateKind::Z: return {1, 0, 0, -1};
        case GateKind::S: return {1, 0, 0, kI};
        case GateKind::T: return {1, 0, 0, std::exp(kI * (M_PI / 4))};
        case GateKind::RX: {
            double c = std::cos(params.at(0) / 2), s = std::sin(params.at(0) / 2);
            return {c, -kI * s, -kI * s, c};
        }
        case GateKind::RY: {
            double c = std::cos(params.at(0) / 2), s = std::sin(params.at(0) / 2);
            return {c, -s, s, c};
        }
        case GateKind::RZ: {
            cplx em = std::exp(-kI * (params.at(0) / 2)), ep = std::exp(kI * (params.at(0) / 2));
            return {em, 0, 0, ep};
        }
        case GateKind::U1Q: {
            std::array<cplx, 4> m;
            for (int i = 0; i < 4; ++i) m[i] = cplx(params.at(2 * i), params.at(2 * i + 1));
            return m;
        }
        default: throw std::logic_error("matrix1q on a two-qubit gate");
    }
}

std::array<cplx, 16> Gate::matrix2q() const {
    // local basis |b1 b2> with b1 the bit of targets[0]
    switch (kind) {
        case GateKind::CX:
            return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
        case GateKind::CZ:
            return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
        case GateKind::SWAP:
            return {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1};
        case GateKind::U2Q: {
            std::array<cplx, 16> m;
            for (int i = 0; i < 16; ++i) m[i] = cplx(params.at(2 * i), params.at(2 * i + 1));
            return m;
        }
        default: throw std::logic_error("matrix2q on a single-qubit gate");
    }
}

Gate Gate::dagger() const {
    switch (kind) {
        case GateKind::H:
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::SWAP:
            return *this;
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            return {kind, targets, {-params.at(0)}};
        case GateKind::S:
            return Gate::u1q(targets[0], {1, 0, 0, -kI});
        case GateKind::T:
            return Gate::u1q(targets[0], {1, 0, 0, std::exp(-kI * (M_PI / 4))});
        case GateKind::U1Q: {
            auto m = matrix1q();
            return Gate::u1q(targets[0], {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
                                          std::conj(m[3])});
        }
        case GateKind::U2Q: {
            auto m = matrix2q();
            std::array<cplx, 16> a;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) a[i * 4 + j] = std::conj(m[j * 4 + i]);
            return Gate::u2q(targets[0], targets[1], a);
        }
    }
    throw std::logic_error("unknown gate kind");
}

void Circuit::validate() const {
    if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
    for (const Gate& g : gates) {
        const auto& info = kind_table().at(g.kind);
        if (int(g.targets.size()) != info.arity)
            throw std::invalid_argument(std::string("gate ") + info.name + ": wrong target count");
        for (int t : g.targets)
            if (t < 0 || t >= n_qubits)
                throw std::invalid_argument(std::string("gate ") + info.name +
                                            ": target out of range");
        if (info.arity == 2 && g.targets[0] == g.targets[1])
            throw std::invalid_argument(std::string("gate ") + info.name + ": repeated target");
        if (info.n_params >= 0 && int(g.params.size()) != info.n_params &&
            !(info.n_params == 0 && g.params.empty()))
            throw std::invalid_argument(std::string("gate ") + info.name +
                                        ": wrong parameter count");
        if (g.kind == GateKind::U1Q) check_unitary(g.matrix1q(), 2, "U1Q");
        if (g.kind == GateKind::U2Q) check_unitary(g.matrix2q(), 4, "U2Q");
    }
}

std::string Circuit::to_text() const {
    std::ostringstream os;
    os << "qubits " << n_qubits << "\n";
    char buf[64];
    for (const Gate& g : gates) {
        os << gate_name(g.kind);
        for (int t : g.targets) os << ' ' << t;
        for (double p : g.params) {
            std::snprintf(buf, sizeof buf, "%.17g", p);
            os << ' ' << buf;
        }
        os << "\n";
    }
    return os.str();
}

Circuit Circuit::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    Circuit c;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (!have_header) {
            if (tok != "qubits")
                throw std::invalid_argument("circuit text: first line must be 'qubits N'");
            if (!(ls >> c.n_qubits) || c.n_qubits < 0)
                throw std::invalid_argument("circuit text: bad qubit count");
            have_header = true;
            continue;
        }
        GateKind kind;
        bool found = false;
        for (const auto& [k, info] : kind_table()) {
            if (tok == info.name) {
                kind = k;
                found = true;
                break;
            }
        }
        if (!found)
            throw std::invalid_argument("circuit text line " + std::to_string(lineno) +
                                        ": unknown gate '" + tok + "'");
        const auto& info = kind_table().at(kind);
        Gate g{kind, {}, {}};
        for (int i = 0; i < info.arity; ++i) {
            int t;
            if (!(ls >> t))
                throw std::invalid_argument("circuit text line " + std::to_string(lineno) +
                                            ": missing target");
            g.targets.push_back(t);
        }
        int want = info.n_params;
        for (int i = 0; i < want; ++i) {
            double p;
            if (!(ls >> p))
                throw std::invalid_argument("circuit text line " + std::to_string(lineno) +
                                            ": missing parameter");
            g.params.push_back(p);
        }
        double extra;
        if (ls >> extra)
            throw std::invalid_argument("circuit text line " + std::to_string(lineno) +
                                        ": trailing tokens");
        c.gates.push_back(std::move(g));
    }
    if (!have_header) throw std::invalid_argument("circuit text: missing 'qubits N' header");
    c.validate();
    return c;
}

Circuit dagger(const Circuit& c) {
    Circuit out(c.n_qubits);
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) out.gates.push_back(it->dagger());
    return out;
}

Circuit tensor_each_qubit(int n, GateKind kind) {
    Circuit c(n);
    for (int q = 0; q < n; ++q) c.add({kind, {q}, {}});
    return c;
}

} // namespace mbrlab
