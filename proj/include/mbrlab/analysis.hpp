// Bound calculators and their Monte-Carlo validators: sparse-approximation
// volumes, LCU success probabilities, depth estimates and the truncated
// two-stage probability computation.
#pragma once

#include <cstdint>
#include <vector>

#include "mbrlab/circuit.hpp"
#include "mbrlab/mbr_state.hpp"
#include "mbrlab/statevector.hpp"

namespace mbrlab {
namespace analysis {

struct VolumeQuery {
    int n = 0;
    int k = 0;
    double eps = 0.0;
    void validate() const;
};

// I(eps; 2^n - K, K): fraction of Haar states within eps of a K-sparse
// state on a fixed support.
double sparse_volume_prob(const VolumeQuery& q);

// Normal CDF with mean (2^n-K)/2^n and variance (2^n-K)K/((2^n+1) 2^(2n)).
double gaussian_volume_approx(const VolumeQuery& q);

// Half-shifted beta parameters, the form the Gaussian display approximates.
double sparse_volume_prob_shifted(const VolumeQuery& q);

// Exponential tail bound, display only; valid for K <= (1-eps) 2^n.
double hoeffding_volume_bound(const VolumeQuery& q);

struct McEstimate {
    double fraction = 0.0;
    double stderr_ = 0.0;
};

// Fraction of Haar draws with mass >= 1-eps on the FIXED support {0..K-1};
// set maximize=true to use the best support per draw instead (exploratory).
McEstimate haar_volume_mc(const VolumeQuery& q, int trials, std::uint64_t seed,
                          bool maximize = false);

struct LcuInstance {
    std::vector<double> weights; // alpha, nonnegative
    GramMatrix gram;
    int n = 0;
    int k = 0;
};

enum class LcuBoundMode { general, mub };

// general: (|a|2^2/|a|1^2)(1 - maxF) + maxF with maxF the largest induced
// infinity norm over off-diagonal blocks; mub: the closed form in (n, K, B).
// Values are capped at 1, where the bound is vacuous anyway.
double lcu_success_bound(const LcuInstance& inst, LcuBoundMode mode);

LcuInstance lcu_instance_of(const MbrState& m, int k);

// Ancilla-register simulation of the linear-combination-of-unitaries
// preparation; returns the |0>-ancilla projection probability.
double lcu_simulate(const MbrState& m);

struct DepthParams {
    int n = 0, k = 0, b = 0;
    double eps = 0.0;
    double d_w = 0.0, d_u = 0.0, d_k = 0.0;
    double delta = 0.0;
    std::vector<double> alpha;
    double max_f = 0.0;
};

struct DepthBounds {
    double m_lower = 0.0; // gate-count order estimate
    double d_lower = 0.0; // depth order estimate
    double d_upper = 0.0;
};

// Order-notation displays evaluated with implicit constant 1; these are
// order estimates, not certified gate counts.
DepthBounds depth_bounds(const DepthParams& p);

struct ChopResult {
    double p_approx = 0.0;
    double p_exact = 0.0;
    double trunc_fidelity = 0.0;
};

// p(x) = |<x|U2 U1|0>|^2 against its rank-K truncation through the reducer.
ChopResult chop_probability(const Circuit& u1, const Circuit& u2, const Circuit& reducer,
                            std::uint64_t x, int k);

} // namespace analysis
} // namespace mbrlab
