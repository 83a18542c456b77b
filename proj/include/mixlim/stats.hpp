#ifndef MIXLIM_STATS_HPP
#define MIXLIM_STATS_HPP

#include "mixlim/model.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mixlim {

/// Verdicts from samples smaller than this are reported as inconclusive.
inline constexpr std::size_t kMinVerdictSize = 100;

struct TestResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    double level = 0.01;
    bool pass = false;  // statistic < critical_value
    std::size_t size_a = 0;
    std::size_t size_b = 0;  // 0 for one-sample tests
    bool conclusive = false;
};

/// Asymptotic Kolmogorov coefficient c(level) = sqrt(-ln(level/2)/2);
/// c(0.01) = 1.628.
double ks_critical_coefficient(double level);

double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov test of a sorted sample against `cdf`.
/// Throws std::invalid_argument for unsorted or empty input.
TestResult ks_one_sample(std::span<const double> sorted_sample,
                         const std::function<double(double)>& cdf, double level = 0.01);

/// Two-sample Kolmogorov-Smirnov test; inputs need not be sorted.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double level = 0.01);

/// max over the grid of |mean_j exp(iu x_j) - exp(exponent(u))|.
double ecf_distance(std::span<const double> sample,
                    const std::function<std::complex<double>(double)>& exponent,
                    std::span<const double> u_grid);

/// `points` equally spaced values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// Linear-interpolation quantile of a sorted sample (type 7).
double sorted_quantile(std::span<const double> sorted, double q);

enum class LlnMode { FullMean, LightMean };

struct LlnCheckConfig {
    std::vector<std::int64_t> ladder;
    std::int64_t replicates = 200;
    std::uint64_t seed = 42;
    LlnMode mode = LlnMode::FullMean;
    double delta = 0.05;
    unsigned threads = 0;
    std::optional<double> eps_override;  // test hook; 0 gives a pure light row
};

struct LlnRung {
    std::int64_t n = 0;
    double median = 0.0;
    double q05 = 0.0;
    double q95 = 0.0;
    double fraction_within = 0.0;  // share of S_n/(n mean) in [1-delta, 1+delta]
};

/// Ratio S_n / (n mean) along the ladder, mean = mean_z or mu1(1).
std::vector<LlnRung> lln_ratio_check(const ModelParams& p, const LlnCheckConfig& config);

/// Coverage nondecreasing along the ladder and >= min_top_fraction at the top.
bool lln_ladder_holds(std::span<const LlnRung> rungs, double min_top_fraction = 0.95);

}  // namespace mixlim

#endif  // MIXLIM_STATS_HPP
