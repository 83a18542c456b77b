#ifndef MIXLIM_DIAGNOSTICS_HPP
#define MIXLIM_DIAGNOSTICS_HPP

#include "mixlim/model.hpp"

#include <span>
#include <utility>
#include <vector>

namespace mixlim {

// Numeric checks of the triangular-array conditions behind the limit
// theorems, evaluated in closed form (or by quadrature where noted) for the
// Exponential / truncated Pareto mixture.

/// sum_k P(Z_nk > beta_n x) = n [(1-eps) e^{-lambda beta x} + eps P(Y > beta x)].
double tail_sum(double x, const ModelParams& p, const InstanceParams& inst, double beta);

/// E|Z - E Z|^r by adaptive Gauss-Kronrod quadrature of the mixture density,
/// split at the kink x = E Z and at the Pareto support ends. Relative error
/// target 1e-8; throws QuadratureError otherwise.
double absolute_central_moment(const ModelParams& p, const InstanceParams& inst, double r);

/// Lyapounov ratio M_n(2+delta) / (n^{delta/2} Var(Z)^{1+delta/2}).
double lyapounov_ratio(const ModelParams& p, const InstanceParams& inst, double delta);

/// Truncated-mean centering sum_k E[Z_nk/beta 1{Z_nk < beta}]. Requires beta > 1.
double centering_a_n(const ModelParams& p, const InstanceParams& inst, double beta);

/// n [E[(Z/beta)^2 1{Z < tau beta}] - E[(Z/beta) 1{Z < tau beta}]^2].
double truncated_variance(const ModelParams& p, const InstanceParams& inst, double beta,
                          double tau);

struct DiagnosticsReport {
    std::vector<std::pair<double, double>> tail_sum_values;  // (x, tail_sum)
    double lyapounov = 0.0;
    double centering_a_n = 0.0;
    double truncated_var = 0.0;
};

DiagnosticsReport diagnose(const ModelParams& p, const InstanceParams& inst, double beta,
                           std::span<const double> x_grid, double delta = 0.5,
                           double tau = 0.1);

}  // namespace mixlim

#endif  // MIXLIM_DIAGNOSTICS_HPP
