#ifndef MIXLIM_STABLE_LIMIT_HPP
#define MIXLIM_STABLE_LIMIT_HPP

#include "mixlim/rng.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mixlim {

/// One-sided alpha-stable reference law without Gaussian part. The Levy
/// measure has tail nu(x, inf) = tail_const * x^-alpha on (0, inf), i.e.
/// density alpha * tail_const * x^{-1-alpha}. `shift` is an additional
/// deterministic location offset.
struct StableLimitSpec {
    double alpha = 0.5;
    double tail_const = 1.0;
    double shift = 0.0;

    /// Throws std::domain_error unless alpha in (0,2) and tail_const > 0.
    void validate() const;
};

/// alpha * tail_const / (1 - alpha) = integral of x nu(dx) over (0, 1] for
/// alpha < 1; for alpha > 1 it is minus the integral over (1, inf).
double compensation_constant(const StableLimitSpec& spec);

/// Characteristic exponent psi(u) with E exp(iuX) = exp(psi(u)).
///
/// compensated = true:  int (e^{iux} - 1 - iux 1{x<=1}) nu(dx) + iu shift
/// compensated = false: int (e^{iux} - 1) nu(dx) + iu shift   (alpha < 1 only)
///
/// For alpha != 1 the closed form -Gamma(1-alpha) c (-iu)^alpha (principal
/// branch) plus the compensation drift is used; alpha = 1 is integrated
/// numerically.
std::complex<double> char_exponent(double u, const StableLimitSpec& spec, bool compensated);

/// Same exponent, always evaluated by numerical quadrature of the Levy
/// integral (used for alpha = 1 and as a cross-check of the closed form).
std::complex<double> char_exponent_quadrature(double u, const StableLimitSpec& spec,
                                              bool compensated);

/// Precomputed exponent evaluator; cheap to call repeatedly.
class StableExponent {
public:
    StableExponent(const StableLimitSpec& spec, bool compensated);

    std::complex<double> operator()(double u) const;

    const StableLimitSpec& spec() const noexcept { return spec_; }
    bool compensated() const noexcept { return compensated_; }

private:
    StableLimitSpec spec_;
    bool compensated_;
    double gamma_factor_ = 0.0;  // -Gamma(1-alpha) * c, alpha != 1
    double drift_ = 0.0;         // coefficient of iu
    double cos_integral_ = 0.0;  // alpha = 1 Levy integral constants
    double sin_integral_ = 0.0;
};

struct CdfValue {
    double value = 0.0;
    double error_bound = 0.0;  // quadrature estimate plus truncation tail bound
};

/// Distribution function by Gil-Pelaez inversion,
///   F(x) = 1/2 - (1/pi) int_0^inf Im[e^{-iux} phi(u)] / u du,
/// truncated at the first u where |phi(u)| < 1e-10. Throws QuadratureError when
/// the error bound exceeds 1e-6.
CdfValue cdf_with_error(double x, const StableLimitSpec& spec, bool compensated);

double cdf(double x, const StableLimitSpec& spec, bool compensated);

/// Lower end of the support for alpha < 1 laws; -infinity otherwise.
double support_lower_bound(const StableLimitSpec& spec, bool compensated);

/// Standard positive stable variate with E exp(-sK) = exp(-s^alpha), alpha in
/// (0,1), from two uniforms (Kanter's representation).
double kanter_variate(double u_angle, double u_exp, double alpha);

/// Totally skewed (beta = 1) stable variate with characteristic function
/// exp(-|u|^alpha (1 - i sign(u) tan(pi alpha / 2))), alpha in (1,2)
/// (Chambers-Mallows-Stuck).
double cms_skewed_variate(double u_angle, double u_exp, double alpha);

/// Draws from the reference law. Always consumes exactly two uniforms.
/// alpha < 1 uses Kanter, alpha in (1,2) uses Chambers-Mallows-Stuck with the
/// scale sigma^alpha = c Gamma(1-alpha) cos(pi alpha/2), alpha = 1 inverts cdf.
double sample_stable(RngStream& rng, const StableLimitSpec& spec, bool compensated);

/// `count` reference draws from one stream seeded with `seed`.
std::vector<double> stable_sample(const StableLimitSpec& spec, bool compensated, std::size_t count,
                                  std::uint64_t seed);

}  // namespace mixlim

#endif  // MIXLIM_STABLE_LIMIT_HPP
