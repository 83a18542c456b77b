#include "mixlim/stats.hpp"

#include "mixlim/regimes.hpp"
#include "mixlim/rng.hpp"
#include "mixlim/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mixlim {

namespace {

TestResult finish(double statistic, double coefficient_scale, double level, std::size_t na,
                  std::size_t nb) {
    TestResult r;
    r.statistic = statistic;
    r.level = level;
    r.critical_value = ks_critical_coefficient(level) * coefficient_scale;
    r.pass = statistic < r.critical_value;
    r.size_a = na;
    r.size_b = nb;
    r.conclusive = na >= kMinVerdictSize && (nb == 0 || nb >= kMinVerdictSize);
    return r;
}

}  // namespace

double ks_critical_coefficient(double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::domain_error("test level must lie in (0, 1)");
    return std::sqrt(-0.5 * std::log(0.5 * level));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

TestResult ks_one_sample(std::span<const double> sorted_sample,
                         const std::function<double(double)>& cdf, double level) {
    if (sorted_sample.empty()) throw std::invalid_argument("KS test needs a nonempty sample");
    if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end()))
        throw std::invalid_argument("one-sample KS input must be sorted");
    const double m = static_cast<double>(sorted_sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        const double f = cdf(sorted_sample[i]);
        const double above = std::abs(static_cast<double>(i + 1) / m - f);
        const double below = std::abs(static_cast<double>(i) / m - f);
        d = std::max({d, above, below});
    }
    return finish(d, 1.0 / std::sqrt(m), level, sorted_sample.size(), 0);
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b, double level) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs nonempty samples");
    std::vector<double> xs(a.begin(), a.end());
    std::vector<double> ys(b.begin(), b.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double na = static_cast<double>(xs.size());
    const double nb = static_cast<double>(ys.size());

    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double x = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == x) ++i;
        while (j < ys.size() && ys[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return finish(d, std::sqrt((na + nb) / (na * nb)), level, xs.size(), ys.size());
}

double ecf_distance(std::span<const double> sample,
                    const std::function<std::complex<double>(double)>& exponent,
                    std::span<const double> u_grid) {
    if (sample.empty() || u_grid.empty())
        throw std::invalid_argument("ECF distance needs a nonempty sample and grid");
    const double m = static_cast<double>(sample.size());
    double worst = 0.0;
    for (const double u : u_grid) {
        double re = 0.0;
        double im = 0.0;
        for (const double x : sample) {
            re += std::cos(u * x);
            im += std::sin(u * x);
        }
        const std::complex<double> empirical(re / m, im / m);
        worst = std::max(worst, std::abs(empirical - std::exp(exponent(u))));
    }
    return worst;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (points == 0) return {};
    if (points == 1) return {lo};
    std::vector<double> g(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
    g.back() = hi;
    return g;
}

double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<LlnRung> lln_ratio_check(const ModelParams& p, const LlnCheckConfig& config) {
    if (config.ladder.size() < 3) throw std::invalid_argument("LLN ladder needs at least 3 rungs");
    if (!std::is_sorted(config.ladder.begin(), config.ladder.end()))
        throw std::invalid_argument("LLN ladder must be increasing");

    std::vector<LlnRung> rungs;
    rungs.reserve(config.ladder.size());
    for (const std::int64_t n : config.ladder) {
        InstanceParams inst = derive_instance(p, n);
        if (config.eps_override) inst = inst.with_mixing(*config.eps_override);
        const double mean =
            config.mode == LlnMode::FullMean ? mean_z(p, inst) : mu1(1.0, p.lambda());

        NormalizationPlan ratio;
        ratio.center = 0.0;
        ratio.scale = static_cast<double>(n) * mean;
        const std::uint64_t rung_seed = substream_seed(config.seed, static_cast<std::uint64_t>(n));
        auto sample = monte_carlo(p, inst, config.replicates, rung_seed, ratio, config.threads);

        std::vector<double>& v = sample.values;
        std::sort(v.begin(), v.end());
        LlnRung r;
        r.n = n;
        r.median = sorted_quantile(v, 0.5);
        r.q05 = sorted_quantile(v, 0.05);
        r.q95 = sorted_quantile(v, 0.95);
        const auto inside = std::count_if(v.begin(), v.end(), [&](double x) {
            return std::abs(x - 1.0) <= config.delta;
        });
        r.fraction_within = static_cast<double>(inside) / static_cast<double>(v.size());
        rungs.push_back(r);
    }
    return rungs;
}

bool lln_ladder_holds(std::span<const LlnRung> rungs, double min_top_fraction) {
    if (rungs.empty()) return false;
    for (std::size_t k = 1; k < rungs.size(); ++k) {
        if (rungs[k].fraction_within < rungs[k - 1].fraction_within) return false;
    }
    return rungs.back().fraction_within >= min_top_fraction;
}

}  // namespace mixlim
