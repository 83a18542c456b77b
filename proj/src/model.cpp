#include "mixlim/model.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mixlim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}

// (e^{d L} - 1) / d, continuous at d = 0.
double expm1_ratio(double d, double log_upper) {
    if (d == 0.0) return log_upper;
    return std::expm1(d * log_upper) / d;
}

// 1 - m^-alpha without cancellation for m close to 1.
double pareto_mass(double alpha, double m) {
    return -std::expm1(-alpha * std::log(m));
}

Asymptotic exp_scaled(double coef, double log_value) {
    constexpr double kLogMax = 709.782712893384;  // log(DBL_MAX)
    const double total = std::log(coef) + log_value;
    if (total > kLogMax) return {std::numeric_limits<double>::infinity(), true};
    return {coef * std::exp(log_value), false};
}

}  // namespace

ModelParams::ModelParams(double alpha, double lambda, double gamma1, double gamma2)
    : alpha_(alpha), lambda_(lambda), gamma1_(gamma1), gamma2_(gamma2) {
    require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0, 2)");
    require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
    require(gamma1 > 0.0 && std::isfinite(gamma1), "gamma1 must be positive");
    require(gamma2 > 0.0 && std::isfinite(gamma2), "gamma2 must be positive");
}

InstanceParams::InstanceParams(std::int64_t n, double eps, double m)
    : InstanceParams(n, eps, m, true) {
    require(eps > 0.0 && eps < 1.0, "mixing probability must lie in (0, 1)");
}

InstanceParams::InstanceParams(std::int64_t n, double eps, double m, bool)
    : n_(n), eps_(eps), m_(m) {
    require(n >= 1, "row size must be positive");
    require(eps >= 0.0 && eps < 1.0, "mixing probability must lie in [0, 1)");
    require(m > 1.0 && std::isfinite(m), "truncation level must be finite and > 1");
}

InstanceParams InstanceParams::with_mixing(double eps) const {
    return InstanceParams(n_, eps, m_, true);
}

InstanceParams derive_instance(const ModelParams& p, std::int64_t n) {
    require(n >= 2, "row size must be at least 2 (eps_n < 1 and M_n > 1)");
    const double nd = static_cast<double>(n);
    const double eps = std::pow(nd, -p.gamma2());
    const double m = std::pow(nd, p.gamma1());
    require(eps > 0.0, "mixing probability n^-gamma2 underflows");
    require(std::isfinite(m), "truncation level n^gamma1 overflows");
    return InstanceParams(n, eps, m);
}

double mu1(double s, double lambda) {
    require(s > 0.0, "moment order must be positive");
    require(lambda > 0.0, "lambda must be positive");
    return std::tgamma(s + 1.0) / std::pow(lambda, s);
}

double mu2(double s, double alpha, double m) {
    require(s > 0.0, "moment order must be positive");
    require(m > 1.0, "truncation level must exceed 1");
    require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0, 2)");
    return alpha * expm1_ratio(s - alpha, std::log(m)) / pareto_mass(alpha, m);
}

double light_partial_moment(double s, double lambda, double upper) {
    require(s >= 0.0, "moment order must be nonnegative");
    if (upper <= 0.0) return 0.0;
    if (std::isinf(upper)) return mu1(s, lambda);
    return std::tgamma(s + 1.0) / std::pow(lambda, s) *
           boost::math::gamma_p(s + 1.0, lambda * upper);
}

double heavy_partial_moment(double s, double alpha, double m, double upper) {
    require(m > 1.0, "truncation level must exceed 1");
    if (upper <= 1.0) return 0.0;
    const double log_upper = std::log(std::min(upper, m));
    return alpha * expm1_ratio(s - alpha, log_upper) / pareto_mass(alpha, m);
}

double mean_z(const ModelParams& p, const InstanceParams& inst) {
    const double eps = inst.eps();
    return (1.0 - eps) * mu1(1.0, p.lambda()) + eps * mu2(1.0, p.alpha(), inst.m());
}

double var_z(const ModelParams& p, const InstanceParams& inst) {
    const double eps = inst.eps();
    const double mean = mean_z(p, inst);
    return (1.0 - eps) * mu1(2.0, p.lambda()) + eps * mu2(2.0, p.alpha(), inst.m()) -
           mean * mean;
}

Asymptotic mean_z_asymptotic(const ModelParams& p, std::int64_t n) {
    require(n >= 1, "row size must be positive");
    const double a = p.alpha();
    const double log_n = std::log(static_cast<double>(n));
    const double light = mu1(1.0, p.lambda());
    if (a == 1.0) {
        // alpha eps_n log(M_n) = n^-gamma2 * gamma1 log n
        if (n == 1) return {light, false};
        const auto heavy = exp_scaled(p.gamma1() * log_n, -p.gamma2() * log_n);
        return {light + heavy.value, heavy.overflow};
    }
    const double exponent = std::max(1.0 - a, 0.0) * p.gamma1() - p.gamma2();
    const auto heavy = exp_scaled(a / std::abs(1.0 - a), exponent * log_n);
    return {light + heavy.value, heavy.overflow};
}

Asymptotic var_z_asymptotic(const ModelParams& p, std::int64_t n) {
    require(n >= 1, "row size must be positive");
    const double a = p.alpha();
    const double log_n = std::log(static_cast<double>(n));
    const double var_x = 1.0 / (p.lambda() * p.lambda());
    const double exponent = (2.0 - a) * p.gamma1() - p.gamma2();
    const auto heavy = exp_scaled(a / (2.0 - a), exponent * log_n);
    return {var_x + heavy.value, heavy.overflow};
}

}  // namespace mixlim
