#pragma once

#include "mmhmc/core.hpp"

#include <functional>
#include <ostream>
#include <vector>

namespace mmhmc {

struct DegenerateWeightsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Retained draws with importance weights and acceptance bookkeeping.
// Unit weights (all log_weights zero) mark plain MCMC output.
struct WeightedChain {
    Matrix samples;  // N x D
    Vector log_weights;
    std::vector<long> iters;     // source MC iteration of each retained sample
    std::vector<char> accepted;  // whether that iteration's proposal was accepted
    double accept_pos = 0.0;
    double accept_mom = 0.0;
    double wall_time = 0.0;  // sampling phase only, seconds
    Matrix momenta;          // 0x0 unless momentum recording was requested

    long n() const { return samples.rows(); }
    int dim() const { return static_cast<int>(samples.cols()); }
    bool unit_weights() const {
        return log_weights.size() == 0 || (log_weights.array() == 0.0).all();
    }
};

using SampleFunc = std::function<double(const Eigen::Ref<const Vector>&)>;

// Self-normalized importance estimate sum(f w)/sum(w), computed with
// max-subtracted log-weights.
double reweighted_estimate(const Vector& f_values, const Vector& log_weights);
double reweighted_estimate(const WeightedChain& chain, const SampleFunc& f);

// ESS_MCMC = N / (1 + 2 sum gamma_k) with Geyer initial-positive-sequence
// truncation; clamped to (0, N]. Zero-variance series report N.
double ess_autocorr(const Vector& series);

// Kong ESS = (sum w)^2 / sum w^2 for nonnegative weights.
double ess_weighted(const Vector& weights);
double ess_weighted_log(const Vector& log_weights);

// Unbiased weighted sample variance
// sigma_w^2 = [W / (W^2 - sum w^2)] * sum w_n (f_n - I)^2,  W = sum w.
double weighted_variance(const Vector& f_values, const Vector& weights);

struct JointEssMcse {
    double m = 0;         // ESS_MCMC of the full series
    double ess = 0;       // weighted ESS of the thinned subset
    double mcse = 0;
    double estimate = 0;  // reweighted estimate over the thinned subset
};

// Combined metric for weighted correlated chains: M := ESS_MCMC over all N
// samples of f; thin at distance ceil(N/M) anchored at the first sample;
// weighted ESS and MCSE = sqrt(sigma_w^2 / ESS) over the thinned subset.
JointEssMcse joint_ess_mcse(const WeightedChain& chain, const SampleFunc& f);
JointEssMcse joint_ess_mcse_coord(const WeightedChain& chain, int coord);

struct VariateStats {
    int index = 0;
    double mean = 0, m = 0, ess = 0, mcse = 0;
};

struct ChainSummary {
    std::vector<VariateStats> variates;
    double min_ess = 0, med_ess = 0, max_ess = 0;
    double min_mcse = 0, med_mcse = 0, max_mcse = 0;
    double min_ess_per_time = 0;   // min ESS / T
    double max_mcse_time = 0;      // max MCSE * T
    double total_distance = 0;     // sum_d |mean_d|
    double total_distance_per_time = 0;
    double accept_pos = 0, accept_mom = 0, wall_time = 0;
    long n = 0;
    int dim = 0;
};

ChainSummary summarize_chain(const WeightedChain& chain);

// Mean of the per-chain aggregate fields across independent chains.
ChainSummary summarize_chains(const std::vector<WeightedChain>& chains);

struct EfficiencyReport {
    ChainSummary method;
    ChainSummary baseline;
    double ef_ess = 1.0;   // (min ESS/T) ratio vs baseline
    double ef_mcse = 1.0;  // (max MCSE*T) baseline/method
};

EfficiencyReport efficiency_report(const std::vector<WeightedChain>& method,
                                   const std::vector<WeightedChain>& baseline);

void summary_csv(const ChainSummary& s, std::ostream& os);
void summary_text(const ChainSummary& s, std::ostream& os);

}  // namespace mmhmc
