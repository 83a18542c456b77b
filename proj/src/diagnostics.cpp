#include "mixlim/diagnostics.hpp"

#include "mixlim/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mixlim {

namespace {

constexpr double kRelTol = 1e-8;

struct Piece {
    double value = 0.0;
    double error = 0.0;
};

template <typename F>
Piece integrate(F f, double a, double b) {
    if (!(b > a)) return {};
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    Piece piece;
    piece.value = rule.integrate(f, a, b, 1e-12, &piece.error);
    return piece;
}

void check_error(double error, double value, const char* what) {
    if (!(error <= kRelTol * std::abs(value))) {
        throw QuadratureError(std::string(what) + ": error estimate " + std::to_string(error) +
                              " against value " + std::to_string(value));
    }
}

double heavy_survival(double y, double alpha, double m) {
    if (y < 1.0) return 1.0;
    if (y >= m) return 0.0;
    const double mass = -std::expm1(-alpha * std::log(m));
    return (std::exp(-alpha * std::log(y)) - std::exp(-alpha * std::log(m))) / mass;
}

}  // namespace

double tail_sum(double x, const ModelParams& p, const InstanceParams& inst, double beta) {
    if (!(x > 0.0)) throw std::domain_error("tail sum needs x > 0");
    if (!(beta > 0.0)) throw std::domain_error("tail sum needs beta > 0");
    const double y = beta * x;
    const double eps = inst.eps();
    const double light = (1.0 - eps) * std::exp(-p.lambda() * y);
    const double heavy = eps * heavy_survival(y, p.alpha(), inst.m());
    return static_cast<double>(inst.n()) * (light + heavy);
}

double absolute_central_moment(const ModelParams& p, const InstanceParams& inst, double r) {
    if (!(r > 0.0)) throw std::domain_error("moment order must be positive");
    const double mean = mean_z(p, inst);
    const double lambda = p.lambda();
    const double alpha = p.alpha();
    const double m = inst.m();
    const double eps = inst.eps();

    // Light part: below the mean by quadrature, above it in closed form
    // (memorylessness: E[(X - c)^r; X > c] = e^{-lambda c} Gamma(r+1)/lambda^r).
    const Piece below = integrate(
        [&](double x) { return std::pow(mean - x, r) * lambda * std::exp(-lambda * x); }, 0.0, mean);
    const double above = std::exp(-lambda * mean) * std::tgamma(r + 1.0) / std::pow(lambda, r);
    const double light = below.value + above;

    if (eps == 0.0) {
        check_error(below.error, light, "light central moment");
        return light;
    }

    // Heavy part on [1, M]; the upper piece is integrated in t = log y.
    const double mass = -std::expm1(-alpha * std::log(m));
    const Piece left = integrate(
        [&](double y) { return std::pow(mean - y, r) * alpha * std::pow(y, -alpha - 1.0); }, 1.0,
        std::min(mean, m));
    const double start = std::max(1.0, mean);
    const Piece right = integrate(
        [&](double t) {
            const double y = std::exp(t);
            return std::pow(y - mean, r) * alpha * std::exp(-alpha * t);
        },
        std::log(start), std::log(m));
    const double heavy = (left.value + right.value) / mass;

    const double total = (1.0 - eps) * light + eps * heavy;
    check_error((1.0 - eps) * below.error + eps * (left.error + right.error) / mass, total,
                "central moment");
    return total;
}

double lyapounov_ratio(const ModelParams& p, const InstanceParams& inst, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("Lyapounov delta must be positive");
    const double moment = absolute_central_moment(p, inst, 2.0 + delta);
    const double var = var_z(p, inst);
    const double n = static_cast<double>(inst.n());
    return moment / (std::pow(n, 0.5 * delta) * std::pow(var, 1.0 + 0.5 * delta));
}

double centering_a_n(const ModelParams& p, const InstanceParams& inst, double beta) {
    if (!(beta > 1.0)) throw std::domain_error("centering needs beta_n > 1");
    const double eps = inst.eps();
    const double light = light_partial_moment(1.0, p.lambda(), beta);
    const double heavy = heavy_partial_moment(1.0, p.alpha(), inst.m(), beta);
    return static_cast<double>(inst.n()) / beta * ((1.0 - eps) * light + eps * heavy);
}

double truncated_variance(const ModelParams& p, const InstanceParams& inst, double beta,
                          double tau) {
    if (!(tau > 0.0)) throw std::domain_error("truncation window tau must be positive");
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    const double eps = inst.eps();
    const double t = tau * beta;
    const double first = ((1.0 - eps) * light_partial_moment(1.0, p.lambda(), t) +
                          eps * heavy_partial_moment(1.0, p.alpha(), inst.m(), t)) /
                         beta;
    const double second = ((1.0 - eps) * light_partial_moment(2.0, p.lambda(), t) +
                           eps * heavy_partial_moment(2.0, p.alpha(), inst.m(), t)) /
                          (beta * beta);
    return static_cast<double>(inst.n()) * (second - first * first);
}

DiagnosticsReport diagnose(const ModelParams& p, const InstanceParams& inst, double beta,
                           std::span<const double> x_grid, double delta, double tau) {
    DiagnosticsReport report;
    report.tail_sum_values.reserve(x_grid.size());
    for (const double x : x_grid) report.tail_sum_values.emplace_back(x, tail_sum(x, p, inst, beta));
    report.lyapounov = lyapounov_ratio(p, inst, delta);
    report.centering_a_n = centering_a_n(p, inst, beta);
    report.truncated_var = truncated_variance(p, inst, beta, tau);
    return report;
}

}  // namespace mixlim
