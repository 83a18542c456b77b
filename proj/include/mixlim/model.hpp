#ifndef MIXLIM_MODEL_HPP
#define MIXLIM_MODEL_HPP

#include <cstdint>

namespace mixlim {

/// Asymptotic family parameters: heavy-tail index alpha in (0,2), light-tail
/// rate lambda, truncation exponent gamma1 (M_n = n^gamma1) and mixing
/// exponent gamma2 (eps_n = n^-gamma2).
class ModelParams {
public:
    /// Throws std::domain_error when any parameter is out of range.
    ModelParams(double alpha, double lambda, double gamma1, double gamma2);

    double alpha() const noexcept { return alpha_; }
    double lambda() const noexcept { return lambda_; }
    double gamma1() const noexcept { return gamma1_; }
    double gamma2() const noexcept { return gamma2_; }

private:
    double alpha_;
    double lambda_;
    double gamma1_;
    double gamma2_;
};

/// Concrete row of the triangular array: n summands, each drawn from
/// (1 - eps) Exponential(lambda) + eps TruncatedPareto(alpha, [1, m]).
class InstanceParams {
public:
    /// Validates 0 < eps < 1 and m > 1.
    InstanceParams(std::int64_t n, double eps, double m);

    std::int64_t n() const noexcept { return n_; }
    double eps() const noexcept { return eps_; }
    double m() const noexcept { return m_; }

    /// Copy with a different mixing probability. Accepts eps = 0, which turns
    /// the row into a pure exponential sample; used by tests and LLN sanity runs.
    InstanceParams with_mixing(double eps) const;

private:
    InstanceParams(std::int64_t n, double eps, double m, bool);

    std::int64_t n_;
    double eps_;
    double m_;
};

/// (n, n^-gamma2, n^gamma1). Requires n >= 2.
InstanceParams derive_instance(const ModelParams& p, std::int64_t n);

/// s-th raw moment of Exponential(lambda): Gamma(s+1) / lambda^s.
double mu1(double s, double lambda);

/// s-th raw moment of the Pareto(alpha) law truncated to [1, m], including the
/// (1 - m^-alpha)^-1 normalization. The s == alpha branch is the log form.
double mu2(double s, double alpha, double m);

/// E[X^s 1{X < upper}] for X ~ Exponential(lambda).
double light_partial_moment(double s, double lambda, double upper);

/// E[Y^s 1{Y < upper}] for Y ~ truncated Pareto(alpha, [1, m]).
double heavy_partial_moment(double s, double alpha, double m, double upper);

double mean_z(const ModelParams& p, const InstanceParams& inst);
double var_z(const ModelParams& p, const InstanceParams& inst);

/// Leading-order value that may exceed the double range; such values are
/// reported as +infinity with `overflow` set.
struct Asymptotic {
    double value = 0.0;
    bool overflow = false;
};

/// mu1(1) + alpha/|1-alpha| n^{max(1-alpha,0) gamma1 - gamma2}; for alpha = 1
/// the log form mu1(1) + alpha eps_n log(M_n).
Asymptotic mean_z_asymptotic(const ModelParams& p, std::int64_t n);

/// Var(X) + alpha/(2-alpha) n^{(2-alpha) gamma1 - gamma2}.
Asymptotic var_z_asymptotic(const ModelParams& p, std::int64_t n);

}  // namespace mixlim

#endif  // MIXLIM_MODEL_HPP
