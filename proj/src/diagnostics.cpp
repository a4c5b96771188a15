#include "mmhmc/diagnostics.hpp"

#include "mmhmc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmhmc {

double reweighted_estimate(const Vector& f_values, const Vector& log_weights) {
    if (f_values.size() < 1 || f_values.size() != log_weights.size())
        throw ContractError("reweighted_estimate: need matching non-empty inputs");
    const double lmax = log_weights.maxCoeff();
    if (!std::isfinite(lmax)) throw DegenerateWeightsError("reweighted_estimate: weights degenerate");
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < f_values.size(); ++i) {
        const double w = std::exp(log_weights[i] - lmax);
        num += w * f_values[i];
        den += w;
    }
    if (den <= 0.0) throw DegenerateWeightsError("reweighted_estimate: all weights underflowed");
    return num / den;
}

double reweighted_estimate(const WeightedChain& chain, const SampleFunc& f) {
    Vector fv(chain.n());
    for (long i = 0; i < chain.n(); ++i) fv[i] = f(chain.samples.row(i).transpose());
    return reweighted_estimate(fv, chain.log_weights);
}

double ess_autocorr(const Vector& series) {
    const Eigen::Index n = series.size();
    if (n < 10) throw ContractError("ess_autocorr: need at least 10 samples");
    const double mean = series.mean();
    const double var = (series.array() - mean).square().sum() / static_cast<double>(n);
    if (var <= 0.0) return static_cast<double>(n);  // no correlation information

    // Geyer initial positive sequence: sum paired autocorrelations
    // rho_{2m} + rho_{2m+1} while positive. Lags computed in blocks so the
    // autocovariance kernel does the heavy lifting.
    const int cap = static_cast<int>(std::min<Eigen::Index>(n - 2, 20000));
    double tau = -1.0;
    bool stopped = false;
    int computed_upto = -1;
    Vector gamma;
    for (int m = 0; 2 * m + 1 <= cap && !stopped; ++m) {
        if (2 * m + 1 > computed_upto) {
            const int next = std::min(cap, computed_upto < 0 ? 255 : computed_upto + 256);
            kernels::autocovariance(series, next, gamma);
            computed_upto = next;
        }
        const double pair = (gamma[2 * m] + gamma[2 * m + 1]) / var;
        if (pair <= 0.0) {
            stopped = true;
        } else {
            tau += 2.0 * pair;
        }
    }
    tau = std::max(tau, 1.0);  // clamp: ESS <= N
    return static_cast<double>(n) / tau;
}

double ess_weighted(const Vector& weights) {
    if (weights.size() < 1) throw ContractError("ess_weighted: empty weights");
    if ((weights.array() < 0.0).any()) throw ContractError("ess_weighted: weights must be nonnegative");
    const double s = weights.sum();
    const double s2 = weights.squaredNorm();
    if (s <= 0.0 || s2 <= 0.0) throw DegenerateWeightsError("ess_weighted: all weights zero");
    return s * s / s2;
}

double ess_weighted_log(const Vector& log_weights) {
    if (log_weights.size() < 1) throw ContractError("ess_weighted_log: empty weights");
    const double lmax = log_weights.maxCoeff();
    if (!std::isfinite(lmax)) throw DegenerateWeightsError("ess_weighted_log: degenerate weights");
    return ess_weighted((log_weights.array() - lmax).exp().matrix());
}

double weighted_variance(const Vector& f_values, const Vector& weights) {
    if (f_values.size() != weights.size() || f_values.size() < 2)
        throw ContractError("weighted_variance: need at least 2 matching samples");
    const double s = weights.sum();
    const double s2 = weights.squaredNorm();
    const double denom = s * s - s2;
    if (!(denom > 0.0))
        throw DegenerateWeightsError("weighted_variance: single effective sample");
    double ihat = 0.0;
    for (Eigen::Index i = 0; i < f_values.size(); ++i) ihat += weights[i] * f_values[i];
    ihat /= s;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < f_values.size(); ++i) {
        const double d = f_values[i] - ihat;
        acc += weights[i] * d * d;
    }
    return s / denom * acc;
}

JointEssMcse joint_ess_mcse(const WeightedChain& chain, const SampleFunc& f) {
    const long n = chain.n();
    if (n < 10) throw ContractError("joint_ess_mcse: need at least 10 samples");
    Vector fv(n);
    for (long i = 0; i < n; ++i) fv[i] = f(chain.samples.row(i).transpose());

    JointEssMcse out;
    out.m = ess_autocorr(fv);
    const long stride = static_cast<long>(std::ceil(static_cast<double>(n) / out.m));
    const long m_count = (n - 1) / stride + 1;

    Vector f_thin(m_count), lw_thin(m_count);
    for (long i = 0; i < m_count; ++i) {
        f_thin[i] = fv[i * stride];
        lw_thin[i] = chain.log_weights[i * stride];
    }
    const double lmax = lw_thin.maxCoeff();
    const Vector w_thin = (lw_thin.array() - lmax).exp().matrix();
    out.ess = ess_weighted(w_thin);
    out.estimate = reweighted_estimate(f_thin, lw_thin);
    if (m_count >= 2)
        out.mcse = std::sqrt(weighted_variance(f_thin, w_thin) / out.ess);
    else
        out.mcse = std::numeric_limits<double>::infinity();
    return out;
}

JointEssMcse joint_ess_mcse_coord(const WeightedChain& chain, int coord) {
    return joint_ess_mcse(chain,
                          [coord](const Eigen::Ref<const Vector>& th) { return th[coord]; });
}

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

ChainSummary summarize_chain(const WeightedChain& chain) {
    ChainSummary s;
    s.n = chain.n();
    s.dim = chain.dim();
    s.accept_pos = chain.accept_pos;
    s.accept_mom = chain.accept_mom;
    s.wall_time = chain.wall_time;
    std::vector<double> esses, mcses;
    for (int d = 0; d < s.dim; ++d) {
        const auto j = joint_ess_mcse_coord(chain, d);
        VariateStats vs;
        vs.index = d;
        vs.mean = reweighted_estimate(chain,
                                      [d](const Eigen::Ref<const Vector>& th) { return th[d]; });
        vs.m = j.m;
        vs.ess = j.ess;
        vs.mcse = j.mcse;
        s.variates.push_back(vs);
        esses.push_back(j.ess);
        mcses.push_back(j.mcse);
        s.total_distance += std::abs(vs.mean);
    }
    s.min_ess = *std::min_element(esses.begin(), esses.end());
    s.max_ess = *std::max_element(esses.begin(), esses.end());
    s.med_ess = median_of(esses);
    s.min_mcse = *std::min_element(mcses.begin(), mcses.end());
    s.max_mcse = *std::max_element(mcses.begin(), mcses.end());
    s.med_mcse = median_of(mcses);
    const double t = chain.wall_time > 0.0 ? chain.wall_time : 1.0;
    s.min_ess_per_time = s.min_ess / t;
    s.max_mcse_time = s.max_mcse * t;
    s.total_distance_per_time = s.total_distance / t;
    return s;
}

ChainSummary summarize_chains(const std::vector<WeightedChain>& chains) {
    if (chains.empty()) throw ContractError("summarize_chains: need at least one chain");
    if (chains.size() == 1) return summarize_chain(chains[0]);
    ChainSummary agg = summarize_chain(chains[0]);
    for (std::size_t i = 1; i < chains.size(); ++i) {
        const ChainSummary s = summarize_chain(chains[i]);
        agg.min_ess += s.min_ess;
        agg.med_ess += s.med_ess;
        agg.max_ess += s.max_ess;
        agg.min_mcse += s.min_mcse;
        agg.med_mcse += s.med_mcse;
        agg.max_mcse += s.max_mcse;
        agg.min_ess_per_time += s.min_ess_per_time;
        agg.max_mcse_time += s.max_mcse_time;
        agg.total_distance += s.total_distance;
        agg.total_distance_per_time += s.total_distance_per_time;
        agg.accept_pos += s.accept_pos;
        agg.accept_mom += s.accept_mom;
        agg.wall_time += s.wall_time;
    }
    const double k = static_cast<double>(chains.size());
    agg.min_ess /= k;
    agg.med_ess /= k;
    agg.max_ess /= k;
    agg.min_mcse /= k;
    agg.med_mcse /= k;
    agg.max_mcse /= k;
    agg.min_ess_per_time /= k;
    agg.max_mcse_time /= k;
    agg.total_distance /= k;
    agg.total_distance_per_time /= k;
    agg.accept_pos /= k;
    agg.accept_mom /= k;
    agg.wall_time /= k;
    agg.variates.clear();  // per-variate rows are per-chain quantities
    return agg;
}

EfficiencyReport efficiency_report(const std::vector<WeightedChain>& method,
                                   const std::vector<WeightedChain>& baseline) {
    EfficiencyReport r;
    r.method = summarize_chains(method);
    r.baseline = summarize_chains(baseline);
    r.ef_ess = r.method.min_ess_per_time / r.baseline.min_ess_per_time;
    r.ef_mcse = r.baseline.max_mcse_time / r.method.max_mcse_time;
    return r;
}

void summary_csv(const ChainSummary& s, std::ostream& os) {
    os << "variate,mean,ess_mcmc,ess,mcse,ess_per_time,mcse_time\n";
    char buf[256];
    const double t = s.wall_time > 0.0 ? s.wall_time : 1.0;
    for (const auto& v : s.variates) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", v.index,
                      v.mean, v.m, v.ess, v.mcse, v.ess / t, v.mcse * t);
        os << buf;
    }
}

void summary_text(const ChainSummary& s, std::ostream& os) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "samples: %ld  dim: %d  wall_time: %.3fs\n"
                  "acceptance: position %.4f  momentum %.4f\n"
                  "ESS  min/med/max: %.1f / %.1f / %.1f   min ESS/T: %.2f\n"
                  "MCSE min/med/max: %.3g / %.3g / %.3g   max MCSE*T: %.3g\n"
                  "total distance |theta|: %.6g  (/T: %.6g)\n",
                  s.n, s.dim, s.wall_time, s.accept_pos, s.accept_mom, s.min_ess, s.med_ess,
                  s.max_ess, s.min_ess_per_time, s.min_mcse, s.med_mcse, s.max_mcse,
                  s.max_mcse_time, s.total_distance, s.total_distance_per_time);
    os << buf;
}

}  // namespace mmhmc
