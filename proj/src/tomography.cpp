#include "mbrlab/tomography.hpp"

#include <json.hpp>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mbrlab/io_util.hpp"
#include "mbrlab/qcore.hpp"
#include "mbrlab/special_functions.hpp"

namespace mbrlab {
namespace tomography {

SampleHistogram sample_in_basis(const StateVector& s, const Circuit& u, std::uint64_t m,
                                std::uint64_t seed) {
    if (u.n_qubits != s.n_qubits) throw std::invalid_argument("sample_in_basis: size mismatch");
    StateVector rotated = apply_circuit(dagger(u), s);
    const std::uint64_t dim = rotated.dim();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
        acc += std::norm(rotated.amps[i]);
        cdf[i] = acc;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, acc);
    SampleHistogram hist;
    hist.n_qubits = s.n_qubits;
    hist.total = m;
    for (std::uint64_t t = 0; t < m; ++t) {
        double x = unif(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), x);
        std::uint64_t idx = std::uint64_t(it - cdf.begin());
        if (idx >= dim) idx = dim - 1;
        ++hist.counts[idx];
    }
    return hist;
}

int eps_rank(const std::vector<double>& probabilities, double eps) {
    if (eps < 0.0 || eps > 1.0) throw std::domain_error("eps_rank: eps must lie in [0, 1]");
    std::vector<double> p = probabilities;
    std::sort(p.begin(), p.end(), std::greater<double>());
    double acc = 0.0;
    const double goal = 1.0 - eps;
    for (std::size_t k = 0; k < p.size(); ++k) {
        acc += p[k];
        if (acc >= goal) return int(k + 1);
    }
    return int(p.size());
}

int eps_rank(const SampleHistogram& hist, double eps) {
    std::vector<double> p;
    p.reserve(hist.counts.size());
    for (const auto& [idx, c] : hist.counts) p.push_back(double(c) / double(hist.total));
    return eps_rank(p, eps);
}

namespace {

// counts sorted descending, ties toward the lower index
std::vector<std::pair<std::uint64_t, std::uint64_t>> ordered_counts(
    const SampleHistogram& hist) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> items(hist.counts.begin(),
                                                               hist.counts.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return items;
}

} // namespace

CertifyResult certify_support(const SampleHistogram& hist, double eps, double delta) {
    if (!(delta > 0.0) || delta > 0.1)
        throw std::invalid_argument(
            "certify_support: delta must lie in (0, 0.1], the interval bound needs z >= 2");
    if (hist.total == 0) throw std::invalid_argument("certify_support: empty histogram");
    CertifyResult out;
    out.k = eps_rank(hist, eps);
    out.threshold = std::sqrt(double(hist.total)) * std::log(2.0 / delta);
    auto items = ordered_counts(hist);
    for (int i = 0; i < out.k; ++i) out.support.push_back(items[std::size_t(i)].first);
    const double next_count =
        std::size_t(out.k) < items.size() ? double(items[std::size_t(out.k)].second) : 0.0;
    // ties at the threshold break toward non-certification
    out.certified = next_count > out.threshold;
    return out;
}

namespace {

double binomial_estimate(double v, std::uint64_t shots, std::mt19937_64& rng) {
    // Hadamard-test quadrature: outcome probability (1 + v) / 2
    const double p = std::clamp(0.5 * (1.0 + v), 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> bin(shots, p);
    return 2.0 * double(bin(rng)) / double(shots) - 1.0;
}

} // namespace

HadamardEstimates hadamard_estimates(const StateVector& s, const Circuit& u,
                                     const std::vector<std::uint64_t>& support,
                                     std::uint64_t m_hadamard, const SampleHistogram& hist,
                                     std::uint64_t seed) {
    if (support.empty()) throw std::invalid_argument("hadamard_estimates: empty support");
    StateVector rotated = apply_circuit(dagger(u), s);
    std::uint64_t count_sum = 0;
    for (std::uint64_t i : support) {
        auto it = hist.counts.find(i);
        if (it == hist.counts.end())
            throw std::invalid_argument("hadamard_estimates: support index was never sampled");
        count_sum += it->second;
    }
    HadamardEstimates out;
    std::vector<std::uint64_t> shots(support.size());
    for (std::size_t k = 0; k < support.size(); ++k) {
        const double mi = double(hist.counts.at(support[k]));
        shots[k] = std::max<std::uint64_t>(
            1, std::uint64_t(std::llround(double(m_hadamard) * mi / (2.0 * double(count_sum)))));
    }
    // rounding can push past the budget; trim the largest allocations
    auto total = [&] {
        std::uint64_t t = 0;
        for (std::uint64_t v : shots) t += 2 * v;
        return t;
    };
    while (total() > m_hadamard) {
        auto it = std::max_element(shots.begin(), shots.end());
        if (*it <= 1) break;
        --*it;
    }
    for (std::size_t k = 0; k < support.size(); ++k) {
        const cplx a = rotated.amps[support[k]];
        std::mt19937_64 rng_re(derive_seed(seed, support[k], 0));
        std::mt19937_64 rng_im(derive_seed(seed, support[k], 1));
        out.a_true.push_back(a);
        out.a_hat.emplace_back(binomial_estimate(a.real(), shots[k], rng_re),
                               binomial_estimate(a.imag(), shots[k], rng_im));
        out.shots_used += 2 * shots[k];
    }
    return out;
}

InversionResult invert_gram(const Eigen::VectorXcd& a_hat, const Eigen::MatrixXcd& f_hat,
                            const std::vector<std::size_t>& block_sizes, double cutoff) {
    if (a_hat.size() != f_hat.rows() || f_hat.rows() != f_hat.cols())
        throw std::invalid_argument("invert_gram: dimension mismatch");
    if (a_hat.norm() == 0.0) throw std::invalid_argument("invert_gram: all-zero amplitude vector");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f_hat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double keep_above = cutoff * sv(0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    double min_kept = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > keep_above) {
            inv(i) = 1.0 / sv(i);
            min_kept = sv(i);
        }
    InversionResult out;
    out.alpha_hat = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint() * a_hat;
    out.pinv_norm = min_kept > 0.0 ? 1.0 / min_kept : 0.0;
    std::size_t off = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        const std::size_t k = block_sizes[b];
        Eigen::VectorXcd block = out.alpha_hat.segment(Eigen::Index(off), Eigen::Index(k));
        const double nrm = block.norm();
        out.alpha_b.push_back(nrm);
        out.zero_block.push_back(nrm < 1e-14);
        std::vector<cplx> cs(k);
        for (std::size_t i = 0; i < k; ++i)
            cs[i] = nrm < 1e-14 ? (i == 0 ? cplx(1.0) : cplx(0.0)) : cplx(block(Eigen::Index(i)) / nrm);
        out.coeffs.push_back(std::move(cs));
        off += k;
    }
    return out;
}

Eigen::MatrixXcd noisy_gram_estimate(const GramMatrix& f, std::uint64_t m_budget,
                                     std::uint64_t seed) {
    Eigen::MatrixXcd out = f.entries;
    const std::size_t dim = f.dim();
    std::vector<std::pair<std::size_t, std::size_t>> todo;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            if (f.flat_to_block[i].first != f.flat_to_block[j].first) todo.emplace_back(i, j);
    if (todo.empty()) return out;
    const std::uint64_t shots =
        std::max<std::uint64_t>(1, m_budget / (2 * std::uint64_t(todo.size())));
    for (auto [i, j] : todo) {
        std::mt19937_64 rng_re(derive_seed(seed, i, j, 0));
        std::mt19937_64 rng_im(derive_seed(seed, i, j, 1));
        const cplx v = f.entries(Eigen::Index(i), Eigen::Index(j));
        const cplx est(binomial_estimate(v.real(), shots, rng_re),
                       binomial_estimate(v.imag(), shots, rng_im));
        out(Eigen::Index(i), Eigen::Index(j)) = est;
        out(Eigen::Index(j), Eigen::Index(i)) = std::conj(est);
    }
    return out;
}

TomographyReport tomography_pipeline(const StateVector& s, const std::vector<Circuit>& bases,
                                     std::uint64_t m_samples, std::uint64_t m_hadamard,
                                     double eps, double delta, std::uint64_t seed,
                                     FMode f_mode) {
    if (bases.empty()) throw std::invalid_argument("tomography: need at least one basis");
    const std::size_t nb = bases.size();
    TomographyReport rep;
    rep.seed = seed;

    // steps a-b: rotate, sample, certify per basis
    std::vector<SampleHistogram> hists;
    std::vector<CertifyResult> certs;
    for (std::size_t b = 0; b < nb; ++b) {
        SampleHistogram hist =
            sample_in_basis(s, bases[b], m_samples, derive_seed(seed, b, 0xA5));
        CertifyResult cert = certify_support(hist, eps, delta);
        rep.supports_certified.push_back(cert.certified);
        hists.push_back(std::move(hist));
        certs.push_back(std::move(cert));
    }

    std::vector<std::vector<std::uint64_t>> supports;
    std::vector<std::size_t> block_sizes;
    for (std::size_t b = 0; b < nb; ++b) {
        supports.push_back(certs[b].support);
        block_sizes.push_back(certs[b].support.size());
    }

    // step c: overlap matrix, exact or with simulated Hadamard-test noise
    // (separate budget M_F = M_H in noisy mode)
    GramMatrix f = frame_gram(bases, supports);
    rep.f_hat = f_mode == FMode::noisy
                    ? noisy_gram_estimate(f, m_hadamard, derive_seed(seed, 0xF0))
                    : f.entries;
    const std::size_t dim = f.dim();

    // step d: amplitude estimates per basis
    Eigen::VectorXcd a_hat(dim);
    std::size_t off = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        HadamardEstimates est = hadamard_estimates(s, bases[b], certs[b].support, m_hadamard,
                                                   hists[b], derive_seed(seed, b, 0xE0));
        for (std::size_t i = 0; i < est.a_hat.size(); ++i) {
            a_hat(Eigen::Index(off + i)) = est.a_hat[i];
            rep.a_hat.push_back(est.a_hat[i]);
        }
        off += est.a_hat.size();
    }

    // step e: invert the Gram system and renormalize per basis
    InversionResult inv = invert_gram(a_hat, rep.f_hat, block_sizes);
    rep.alpha_hat = inv.alpha_hat;
    for (std::size_t b = 0; b < nb; ++b) {
        rep.recovered.bases.push_back(bases[b]);
        rep.recovered.weights.push_back(inv.alpha_b[b]);
        rep.recovered.components.emplace_back(s.n_qubits, certs[b].support, inv.coeffs[b]);
    }

    // oracle diagnostic: overlap between truth and the reassembled state
    StateVector reassembled = assemble(rep.recovered);
    const double nrm = reassembled.norm();
    if (nrm > 0.0) {
        rep.fidelity_to_truth = std::norm(inner(s, reassembled)) / (nrm * nrm);
    }

    // first-order error propagation with the measurement-error bounds
    const double d_total = double(dim);
    const double noise = std::sqrt(std::log(2.0 / delta) / double(m_hadamard));
    const double a_err = std::sqrt(2.0 * std::sqrt(2.0) * d_total * noise);
    const double f_err =
        f_mode == FMode::noisy ? std::sqrt(2.0 * std::sqrt(2.0) * d_total * d_total * noise) : 0.0;
    rep.error_bound = inv.pinv_norm * a_err +
                      inv.pinv_norm * inv.pinv_norm * f_err * a_hat.norm();
    return rep;
}

std::pair<double, double> wilson_interval(std::uint64_t count, std::uint64_t m, double delta) {
    if (m == 0 || count > m) throw std::invalid_argument("wilson_interval: need 0 <= count <= M");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("wilson_interval: delta must lie in (0, 1)");
    const double z = normal_quantile(1.0 - delta / 2.0);
    const double p = double(count) / double(m);
    const double denom = 1.0 + z * z / double(m);
    const double center = (p + z * z / (2.0 * double(m))) / denom;
    const double half =
        z / denom * std::sqrt(p * (1.0 - p) / double(m) + z * z / (4.0 * double(m) * double(m)));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string TomographyReport::to_json() const {
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["supports_certified"] = supports_certified;
    doc["fidelity_to_truth"] = fidelity_to_truth;
    doc["error_bound"] = error_bound;
    auto cvec = [](const std::vector<cplx>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const cplx& c : v) arr.push_back({c.real(), c.imag()});
        return arr;
    };
    doc["a_hat"] = cvec(a_hat);
    std::vector<cplx> alpha(alpha_hat.data(), alpha_hat.data() + alpha_hat.size());
    doc["alpha_hat"] = cvec(alpha);
    nlohmann::json fh = nlohmann::json::array();
    for (Eigen::Index i = 0; i < f_hat.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < f_hat.cols(); ++j)
            row.push_back({f_hat(i, j).real(), f_hat(i, j).imag()});
        fh.push_back(std::move(row));
    }
    doc["F_hat"] = std::move(fh);
    doc["recovered"] = nlohmann::json::parse(recovered.to_json());
    return doc.dump(2) + "\n";
}

} // namespace tomography
} // namespace mbrlab
