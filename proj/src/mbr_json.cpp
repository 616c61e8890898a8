// JSON document form of an MBR state:
//   { "n": int, "bases": [circuit-text], "weights": [float],
//     "components": [{"support": [int], "coeffs": [[re, im]]}] }
#include <json.hpp>

#include "mbrlab/io_util.hpp"
#include "mbrlab/mbr_state.hpp"

namespace mbrlab {

using nlohmann::json;

std::string MbrState::to_json() const {
    validate();
    json doc;
    doc["n"] = n_qubits();
    doc["bases"] = json::array();
    for (const Circuit& c : bases) doc["bases"].push_back(c.to_text());
    doc["weights"] = weights;
    doc["components"] = json::array();
    for (const SparseState& s : components) {
        json comp;
        comp["support"] = s.support;
        json cs = json::array();
        for (const cplx& c : s.coeffs) cs.push_back({c.real(), c.imag()});
        comp["coeffs"] = std::move(cs);
        doc["components"].push_back(std::move(comp));
    }
    return doc.dump(2) + "\n";
}

MbrState MbrState::from_json(const std::string& text) {
    json doc = json::parse(text);
    MbrState m;
    const int n = doc.at("n").get<int>();
    for (const auto& t : doc.at("bases")) {
        Circuit c = Circuit::from_text(t.get<std::string>());
        if (c.n_qubits != n)
            throw std::invalid_argument("MBR json: basis circuit qubit count mismatch");
        m.bases.push_back(std::move(c));
    }
    m.weights = doc.at("weights").get<std::vector<double>>();
    for (const auto& comp : doc.at("components")) {
        auto support = comp.at("support").get<std::vector<std::uint64_t>>();
        std::vector<cplx> coeffs;
        for (const auto& pair : comp.at("coeffs")) {
            if (pair.size() != 2)
                throw std::invalid_argument("MBR json: coefficient entries must be [re, im]");
            coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        m.components.emplace_back(n, std::move(support), std::move(coeffs));
    }
    m.validate();
    return m;
}

void MbrState::save(const std::string& path) const { atomic_write_file(path, to_json()); }

MbrState MbrState::load(const std::string& path) { return from_json(read_file(path)); }

} // namespace mbrlab
