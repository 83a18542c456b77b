#ifndef MIXLIM_SAMPLERS_HPP
#define MIXLIM_SAMPLERS_HPP

#include "mixlim/model.hpp"
#include "mixlim/regimes.hpp"
#include "mixlim/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace mixlim {

/// Exponential(lambda) inverse CDF, -log(1-u)/lambda, for u in [0, 1).
double quantile_light(double u, double lambda);

/// Inverse of the Pareto(alpha) CDF truncated to [1, m], for u in [0, 1].
double quantile_truncated_pareto(double u, double alpha, double m);

/// Hot-loop sampler for one row law. Holds the constants of both inverse
/// CDFs so a draw is one comparison plus one log or pow.
class MixtureSampler {
public:
    MixtureSampler(const ModelParams& p, const InstanceParams& inst);

    bool is_heavy(double u_bernoulli) const noexcept { return u_bernoulli <= eps_; }

    /// Deterministic draw from the Bernoulli uniform and the value uniform.
    double from_uniforms(double u_bernoulli, double u_value) const noexcept {
        if (is_heavy(u_bernoulli)) return heavy(u_value);
        return -std::log1p(-u_value) * inv_lambda_;
    }

    /// Consumes exactly two uniforms regardless of the branch taken.
    double operator()(RngStream& rng) const noexcept {
        const double ub = rng.uniform();
        const double uv = rng.uniform();
        return from_uniforms(ub, uv);
    }

private:
    double heavy(double u) const noexcept;

    double eps_;
    double inv_lambda_;
    double pareto_mass_;  // 1 - m^-alpha
    double neg_inv_alpha_;
    double m_;
};

/// One draw of Z = (1 - B) X + B Y.
double sample_mixture(RngStream& rng, const ModelParams& p, const InstanceParams& inst);

struct RowDraw {
    double sum = 0.0;
    std::int64_t heavy_count = 0;
};

/// S_n over one row, pairwise-summed; 2n uniforms consumed.
RowDraw sample_row(RngStream& rng, const MixtureSampler& sampler, std::int64_t n);

double sample_sum(RngStream& rng, const ModelParams& p, const InstanceParams& inst);

struct SumSample {
    std::vector<double> values;  // (S_n - center) / scale, ordered by replicate
    std::int64_t n = 0;
    NormalizationPlan plan;
    double heavy_count_mean = 0.0;
};

/// Replicate k uses RngStream::substream(master_seed, k). Replicates are
/// distributed over `thread_count` workers (0 = hardware concurrency); the
/// output does not depend on the thread count.
SumSample monte_carlo(const ModelParams& p, const InstanceParams& inst, std::int64_t replicates,
                      std::uint64_t master_seed, const NormalizationPlan& plan,
                      unsigned thread_count);

/// Convenience overload deriving the row parameters from n.
SumSample monte_carlo(const ModelParams& p, std::int64_t n, std::int64_t replicates,
                      std::uint64_t master_seed, const NormalizationPlan& plan,
                      unsigned thread_count);

}  // namespace mixlim

#endif  // MIXLIM_SAMPLERS_HPP
