#include "mixlim/samplers.hpp"

#include "mixlim/summation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mixlim {

double quantile_light(double u, double lambda) {
    if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("light quantile requires u in [0, 1)");
    if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
    return -std::log1p(-u) / lambda;
}

double quantile_truncated_pareto(double u, double alpha, double m) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("Pareto quantile requires u in [0, 1]");
    if (!(m > 1.0)) throw std::domain_error("truncation level must exceed 1");
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    if (u == 1.0) return m;
    const double mass = -std::expm1(-alpha * std::log(m));
    return std::clamp(std::pow(1.0 - u * mass, -1.0 / alpha), 1.0, m);
}

MixtureSampler::MixtureSampler(const ModelParams& p, const InstanceParams& inst)
    : eps_(inst.eps()),
      inv_lambda_(1.0 / p.lambda()),
      pareto_mass_(-std::expm1(-p.alpha() * std::log(inst.m()))),
      neg_inv_alpha_(-1.0 / p.alpha()),
      m_(inst.m()) {}

double MixtureSampler::heavy(double u) const noexcept {
    return std::min(std::pow(1.0 - u * pareto_mass_, neg_inv_alpha_), m_);
}

double sample_mixture(RngStream& rng, const ModelParams& p, const InstanceParams& inst) {
    return MixtureSampler(p, inst)(rng);
}

RowDraw sample_row(RngStream& rng, const MixtureSampler& sampler, std::int64_t n) {
    PairwiseAccumulator<double> acc;
    RowDraw row;
    for (std::int64_t k = 0; k < n; ++k) {
        const double ub = rng.uniform();
        const double uv = rng.uniform();
        row.heavy_count += sampler.is_heavy(ub) ? 1 : 0;
        acc.add(sampler.from_uniforms(ub, uv));
    }
    row.sum = acc.result();
    return row;
}

double sample_sum(RngStream& rng, const ModelParams& p, const InstanceParams& inst) {
    return sample_row(rng, MixtureSampler(p, inst), inst.n()).sum;
}

SumSample monte_carlo(const ModelParams& p, const InstanceParams& inst, std::int64_t replicates,
                      std::uint64_t master_seed, const NormalizationPlan& plan,
                      unsigned thread_count) {
    if (replicates < 1) throw std::domain_error("replicates must be at least 1");
    if (!(plan.scale > 0.0)) throw std::domain_error("normalization scale must be positive");

    const MixtureSampler sampler(p, inst);
    const auto reps = static_cast<std::size_t>(replicates);
    std::vector<double> values(reps);
    std::vector<std::int64_t> heavy(reps);

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t k = next++; k < reps; k = next++) {
            RngStream rng = RngStream::substream(master_seed, k);
            const RowDraw row = sample_row(rng, sampler, inst.n());
            values[k] = (row.sum - plan.center) / plan.scale;
            heavy[k] = row.heavy_count;
        }
    };

    unsigned threads = thread_count == 0 ? std::thread::hardware_concurrency() : thread_count;
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::min<std::size_t>(reps, 1024)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    SumSample out;
    out.n = inst.n();
    out.plan = plan;
    double heavy_total = 0.0;
    for (const auto h : heavy) heavy_total += static_cast<double>(h);
    out.heavy_count_mean = heavy_total / static_cast<double>(reps);
    out.values = std::move(values);
    return out;
}

SumSample monte_carlo(const ModelParams& p, std::int64_t n, std::int64_t replicates,
                      std::uint64_t master_seed, const NormalizationPlan& plan,
                      unsigned thread_count) {
    return monte_carlo(p, derive_instance(p, n), replicates, master_seed, plan, thread_count);
}

}  // namespace mixlim
