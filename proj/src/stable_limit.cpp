#include "mixlim/stable_limit.hpp"

#include "mixlim/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mixlim {

namespace {

using std::numbers::pi;

// (cos t - 1) / t^2, finite at 0.
double cos_minus_one_over_sq(double t) {
    if (t == 0.0) return -0.5;
    const double s = std::sin(0.5 * t) / t;
    return -2.0 * s * s;
}

// (sin t - t) / t^3, finite at 0.
double sin_minus_identity_over_cube(double t) {
    if (std::abs(t) > 0.5) return (std::sin(t) - t) / (t * t * t);
    const double t2 = t * t;
    double term = -1.0 / 6.0;
    double sum = term;
    for (int k = 2; k <= 7; ++k) {
        term *= -t2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
    }
    return sum;
}

struct LevyIntegrals {
    double cos_part;  // int_0^inf (cos t - 1) alpha t^{-1-alpha} dt
    double sin_part;  // int_0^inf (sin t - t 1{t<=1}) alpha t^{-1-alpha} dt
};

// Unit-scale Levy integrals. [0,1] by tanh-sinh (integrable endpoint
// singularity for alpha > 1), [1,inf) by Ooura's double-exponential Fourier
// rule applied to the shifted weight alpha (s+1)^{-1-alpha}.
LevyIntegrals levy_integrals(double alpha) {
    namespace q = boost::math::quadrature;
    const double tol = 1e-13;

    q::tanh_sinh<double> ts;
    double err_c = 0.0;
    double err_s = 0.0;
    const double near_c = ts.integrate(
        [alpha](double t) { return cos_minus_one_over_sq(t) * alpha * std::pow(t, 1.0 - alpha); },
        0.0, 1.0, tol, &err_c);
    const double near_s = ts.integrate(
        [alpha](double t) {
            return sin_minus_identity_over_cube(t) * alpha * std::pow(t, 2.0 - alpha);
        },
        0.0, 1.0, tol, &err_s);

    const auto weight = [alpha](double s) { return alpha * std::pow(s + 1.0, -1.0 - alpha); };
    q::ooura_fourier_cos<double> fc(tol);
    q::ooura_fourier_sin<double> fs(tol);
    const auto [wc, wc_err] = fc.integrate(weight, 1.0);
    const auto [ws, ws_err] = fs.integrate(weight, 1.0);

    // cos(s+1) = cos s cos 1 - sin s sin 1, sin(s+1) = sin s cos 1 + cos s sin 1
    const double c1 = std::cos(1.0);
    const double s1 = std::sin(1.0);
    const double far_cos = wc * c1 - ws * s1;
    const double far_sin = ws * c1 + wc * s1;

    const double err = err_c + err_s + wc_err + ws_err;
    if (!(err < 1e-9)) {
        throw QuadratureError("Levy integral for alpha=" + std::to_string(alpha) +
                              " did not converge (error estimate " + std::to_string(err) + ")");
    }
    // int_1^inf alpha t^{-1-alpha} dt = 1
    return {near_c + far_cos - 1.0, near_s + far_sin};
}

// (1 - u^{1-alpha}) / (1 - alpha), the compensator difference between the
// windows x <= 1 and t <= u after scaling t = u x; -log u at alpha = 1.
double window_shift(double u, double alpha) {
    if (alpha == 1.0) return -std::log(u);
    return -std::expm1((1.0 - alpha) * std::log(u)) / (1.0 - alpha);
}

constexpr double kPhiFloor = 1e-10;
constexpr double kCdfTolerance = 1e-6;
constexpr double kMaxPanels = 400.0;

}  // namespace

void StableLimitSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::domain_error("stable alpha must lie in (0, 2)");
    if (!(tail_const > 0.0 && std::isfinite(tail_const)))
        throw std::domain_error("stable tail constant must be positive");
    if (!std::isfinite(shift)) throw std::domain_error("stable shift must be finite");
}

double compensation_constant(const StableLimitSpec& spec) {
    spec.validate();
    if (spec.alpha == 1.0) throw std::domain_error("compensation constant undefined at alpha = 1");
    return spec.alpha * spec.tail_const / (1.0 - spec.alpha);
}

StableExponent::StableExponent(const StableLimitSpec& spec, bool compensated)
    : spec_(spec), compensated_(compensated) {
    spec_.validate();
    if (!compensated && spec_.alpha >= 1.0)
        throw std::domain_error("uncompensated Levy integral diverges for alpha >= 1");
    drift_ = spec_.shift;
    if (spec_.alpha == 1.0) {
        const auto li = levy_integrals(1.0);
        cos_integral_ = li.cos_part;
        sin_integral_ = li.sin_part;
    } else {
        gamma_factor_ = -std::tgamma(1.0 - spec_.alpha) * spec_.tail_const;
        if (compensated) drift_ -= compensation_constant(spec_);
    }
}

std::complex<double> StableExponent::operator()(double u) const {
    if (u == 0.0) return {0.0, 0.0};
    const double au = std::abs(u);
    std::complex<double> psi;
    if (spec_.alpha == 1.0) {
        const double c = spec_.tail_const;
        psi = {c * au * cos_integral_, c * au * (sin_integral_ - std::log(au))};
        if (u < 0.0) psi = std::conj(psi);
        return psi + std::complex<double>(0.0, drift_ * u);
    }
    // (-iu)^alpha = |u|^alpha exp(-i sign(u) pi alpha / 2)
    const double mag = gamma_factor_ * std::pow(au, spec_.alpha);
    const double phase = (u > 0.0 ? -0.5 : 0.5) * pi * spec_.alpha;
    return {mag * std::cos(phase), mag * std::sin(phase) + drift_ * u};
}

std::complex<double> char_exponent(double u, const StableLimitSpec& spec, bool compensated) {
    return StableExponent(spec, compensated)(u);
}

std::complex<double> char_exponent_quadrature(double u, const StableLimitSpec& spec,
                                              bool compensated) {
    spec.validate();
    if (!compensated && spec.alpha >= 1.0)
        throw std::domain_error("uncompensated Levy integral diverges for alpha >= 1");
    if (u == 0.0) return {0.0, 0.0};
    const double a = spec.alpha;
    const double c = spec.tail_const;
    const double au = std::abs(u);
    const auto li = levy_integrals(a);
    // Substituting t = |u| x maps the x <= 1 window onto t <= |u|.
    const double scale = c * std::pow(au, a);
    std::complex<double> psi(scale * li.cos_part, scale * (li.sin_part + a * window_shift(au, a)));
    if (u < 0.0) psi = std::conj(psi);
    double drift = spec.shift;
    if (!compensated) drift += a * c / (1.0 - a);
    return psi + std::complex<double>(0.0, drift * u);
}

double support_lower_bound(const StableLimitSpec& spec, bool compensated) {
    if (spec.alpha >= 1.0) return -std::numeric_limits<double>::infinity();
    return spec.shift - (compensated ? compensation_constant(spec) : 0.0);
}

CdfValue cdf_with_error(double x, const StableLimitSpec& spec, bool compensated) {
    namespace q = boost::math::quadrature;
    const StableExponent psi(spec, compensated);
    if (x <= support_lower_bound(spec, compensated)) return {0.0, 0.0};

    // Truncation point: first u on a geometric ladder with |phi(u)| < 1e-10.
    const double log_floor = std::log(kPhiFloor);
    double upper = 1.0;
    for (int i = 0; psi(upper).real() > log_floor; ++i) {
        if (i > 400) throw QuadratureError("characteristic function does not decay");
        upper *= 1.25;
    }

    const auto integrand = [&psi, x](double u) {
        if (u == 0.0) return 0.0;
        const auto z = psi(u);
        return std::exp(z.real()) * std::sin(z.imag() - u * x) / u;
    };

    const double speed = std::abs(x) + std::abs(spec.shift) + 1.0 +
                         (compensated && spec.alpha < 1.0 ? compensation_constant(spec) : 0.0);
    const double width = pi / speed;
    const double head_end = std::min(upper, width);

    // Many oscillations: split sin(theta - ux) and use Fourier rules in x.
    if (upper / width > kMaxPanels && x != 0.0) {
        thread_local q::ooura_fourier_cos<double> fc(1e-10);
        thread_local q::ooura_fourier_sin<double> fs(1e-10);
        const double w = std::abs(x);
        const double sign = x > 0.0 ? 1.0 : -1.0;
        const auto [ic, ic_rel] = fc.integrate(
            [&psi](double u) {
                if (u == 0.0) return 0.0;
                const auto z = psi(u);
                return std::exp(z.real()) * std::sin(z.imag()) / u;
            },
            w);
        const auto [is, is_rel] = fs.integrate(
            [&psi](double u) {
                if (u == 0.0) return 0.0;
                const auto z = psi(u);
                return std::exp(z.real()) * std::cos(z.imag()) / u;
            },
            w);
        const double total = ic - sign * is;
        const double error = (std::abs(ic) * ic_rel + std::abs(is) * is_rel) / pi;
        if (!(error < kCdfTolerance)) {
            throw QuadratureError("Gil-Pelaez inversion at x=" + std::to_string(x) +
                                  " did not converge: error bound " + std::to_string(error));
        }
        return {std::clamp(0.5 - total / pi, 0.0, 1.0), error};
    }

    double err_total = 0.0;
    q::tanh_sinh<double> ts;
    double head_err = 0.0;
    double total = ts.integrate(integrand, 0.0, head_end, 1e-12, &head_err);
    err_total += head_err;

    for (double a = head_end; a < upper;) {
        const double b = std::min(a + width, upper);
        double panel_err = 0.0;
        total += q::gauss_kronrod<double, 31>::integrate(integrand, a, b, 3, 1e-12, &panel_err);
        err_total += panel_err;
        a = b;
    }

    // int_U^inf e^{-k u^a}/u du <= e^{-k U^a} / (a k U^a)
    const double re_tail = -psi(upper).real();
    const double tail = std::exp(-re_tail) / (spec.alpha * re_tail);
    const double error = (err_total + tail) / pi;
    if (!(error < kCdfTolerance)) {
        throw QuadratureError("Gil-Pelaez inversion at x=" + std::to_string(x) +
                              " did not converge: error bound " + std::to_string(error) +
                              " over [0, " + std::to_string(upper) + "]");
    }
    const double value = std::clamp(0.5 - total / pi, 0.0, 1.0);
    return {value, error};
}

double cdf(double x, const StableLimitSpec& spec, bool compensated) {
    return cdf_with_error(x, spec, compensated).value;
}

double kanter_variate(double u_angle, double u_exp, double alpha) {
    const double angle = pi * u_angle;
    const double e = -std::log(u_exp);
    const double ratio = std::sin(alpha * angle) / std::pow(std::sin(angle), 1.0 / alpha);
    return ratio * std::pow(std::sin((1.0 - alpha) * angle) / e, (1.0 - alpha) / alpha);
}

double cms_skewed_variate(double u_angle, double u_exp, double alpha) {
    const double v = pi * (u_angle - 0.5);
    const double w = -std::log(u_exp);
    const double t = std::tan(0.5 * pi * alpha);
    const double b = std::atan(t) / alpha;
    const double s = std::pow(1.0 + t * t, 0.5 / alpha);
    const double lead = std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha);
    return s * lead * std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
}

double sample_stable(RngStream& rng, const StableLimitSpec& spec, bool compensated) {
    spec.validate();
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double a = spec.alpha;
    const double c = spec.tail_const;

    if (a < 1.0) {
        const double scale = std::pow(std::tgamma(1.0 - a) * c, 1.0 / a);
        const double base = scale * kanter_variate(u1, u2, a) + spec.shift;
        return compensated ? base - compensation_constant(spec) : base;
    }
    if (!compensated) throw std::domain_error("uncompensated stable law requires alpha < 1");
    if (a > 1.0) {
        // Mean-zero law -Gamma(1-a) c (-iu)^a; the compensated law sits
        // a c / (a - 1) to its right.
        const double sigma = std::pow(c * std::tgamma(1.0 - a) * std::cos(0.5 * pi * a), 1.0 / a);
        return sigma * cms_skewed_variate(u1, u2, a) - compensation_constant(spec) + spec.shift;
    }

    // alpha = 1: invert the numerical distribution function.
    const auto target = [&](double x) { return cdf(x, spec, compensated) - u1; };
    double lo = spec.shift - 1.0;
    double hi = spec.shift + 1.0;
    for (int i = 0; target(lo) > 0.0; ++i) {
        if (i > 60) throw QuadratureError("cdf inversion: lower bracket not found");
        lo -= 2.0 * (hi - lo);
    }
    for (int i = 0; target(hi) < 0.0; ++i) {
        if (i > 60) throw QuadratureError("cdf inversion: upper bracket not found");
        hi += 2.0 * (hi - lo);
    }
    std::uintmax_t max_iter = 100;
    const auto [left, right] = boost::math::tools::toms748_solve(
        target, lo, hi, boost::math::tools::eps_tolerance<double>(40), max_iter);
    if (max_iter >= 100) throw QuadratureError("cdf inversion did not converge");
    return 0.5 * (left + right);
}

std::vector<double> stable_sample(const StableLimitSpec& spec, bool compensated, std::size_t count,
                                  std::uint64_t seed) {
    spec.validate();
    RngStream rng(seed);
    std::vector<double> out(count);
    for (double& v : out) v = sample_stable(rng, spec, compensated);
    return out;
}

}  // namespace mixlim
