// Simulated tomography of MBR states: sampling, support certification,
// Hadamard-test amplitude estimation, and the Gram-system inversion that
// turns measured data back into an MBR.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mbrlab/circuit.hpp"
#include "mbrlab/mbr_state.hpp"
#include "mbrlab/statevector.hpp"

namespace mbrlab {
namespace tomography {

struct SampleHistogram {
    int n_qubits = 0;
    std::uint64_t total = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
};

// Multinomial draw of M samples from |<i|U^dag|psi>|^2.
SampleHistogram sample_in_basis(const StateVector& s, const Circuit& u, std::uint64_t m,
                                std::uint64_t seed);

// Smallest K whose top-K probability mass reaches 1 - eps.
int eps_rank(const std::vector<double>& probabilities, double eps);
int eps_rank(const SampleHistogram& hist, double eps);

struct CertifyResult {
    std::vector<std::uint64_t> support; // top-K indices by count, ties toward lower index
    int k = 0;
    bool certified = false;
    double threshold = 0.0; // sqrt(M) log(2/delta)
};

// Valid for 0 < delta <= 0.1 (the interval derivation needs z >= 2).
CertifyResult certify_support(const SampleHistogram& hist, double eps, double delta);

struct HadamardEstimates {
    std::vector<cplx> a_true; // oracle values <i|U^dag|psi>
    std::vector<cplx> a_hat;  // binomial Hadamard-test simulation
    std::uint64_t shots_used = 0;
};

// Shot budget per element: M_H m_i / (2 sum_j m_j) per quadrature, at least
// one shot each, trimmed so the basis total never exceeds M_H.
HadamardEstimates hadamard_estimates(const StateVector& s, const Circuit& u,
                                     const std::vector<std::uint64_t>& support,
                                     std::uint64_t m_hadamard, const SampleHistogram& hist,
                                     std::uint64_t seed);

struct InversionResult {
    Eigen::VectorXcd alpha_hat; // F^+ a
    std::vector<double> alpha_b;
    std::vector<std::vector<cplx>> coeffs; // per-basis normalized coefficients
    std::vector<bool> zero_block;
    double pinv_norm = 0.0; // ||F^+||_2
};

InversionResult invert_gram(const Eigen::VectorXcd& a_hat, const Eigen::MatrixXcd& f_hat,
                            const std::vector<std::size_t>& block_sizes, double cutoff = 1e-8);

// Hadamard-test noise model applied to the off-diagonal blocks of an exact
// overlap matrix; the budget is split evenly across estimated entries.
// Diagonal blocks are identity by construction and are not measured.
Eigen::MatrixXcd noisy_gram_estimate(const GramMatrix& f, std::uint64_t m_budget,
                                     std::uint64_t seed);

enum class FMode { exact, noisy };

struct TomographyReport {
    MbrState recovered;
    std::vector<bool> supports_certified;
    std::vector<cplx> a_hat;
    Eigen::MatrixXcd f_hat;
    Eigen::VectorXcd alpha_hat;
    double fidelity_to_truth = 0.0; // oracle diagnostic
    double error_bound = 0.0;       // first-order propagation bound
    std::uint64_t seed = 0;

    std::string to_json() const;
};

TomographyReport tomography_pipeline(const StateVector& s, const std::vector<Circuit>& bases,
                                     std::uint64_t m_samples, std::uint64_t m_hadamard,
                                     double eps, double delta, std::uint64_t seed,
                                     FMode f_mode = FMode::exact);

// Wilson score interval for count successes out of m at confidence 1-delta.
std::pair<double, double> wilson_interval(std::uint64_t count, std::uint64_t m, double delta);

} // namespace tomography
} // namespace mbrlab
