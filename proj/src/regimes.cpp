#include "mixlim/regimes.hpp"

#include "mixlim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mixlim {

namespace {

// Strict comparisons with a band of kBoundaryTolerance around equality.
double band(double a, double b) {
    return kBoundaryTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}
bool above(double a, double b) { return a > b + band(a, b); }
bool below(double a, double b) { return a < b - band(a, b); }
bool on_line(double a, double b) { return !above(a, b) && !below(a, b); }

std::optional<int> zone_of(Fluctuation f, LlnRegime l) {
    using F = Fluctuation;
    using L = LlnRegime;
    if (f == F::CltFull && l == L::LlnFull) return 1;
    if (f == F::CltLightPart && l == L::LlnFull) return 2;
    if (f == F::CltLightPart && l == L::LlnLightPart) return 3;
    if (f == F::Stable && l == L::LlnLightPart) return 4;
    if (f == F::Stable && l == L::None) return 5;
    if (f == F::Stable && l == L::LlnFull) return 6;
    return std::nullopt;
}

RegimeReport classify_light_heavy(double a, double g1, double g2) {
    RegimeReport r;

    // Fluctuations.
    const double clt_line = (2.0 - a) * g1;
    const double small_jump_line = 1.0 - a * g1;
    const double stable_ceiling = 1.0 - a / 2.0;
    const bool clt_full = above(g2, clt_line) || below(g2, std::min(clt_line, small_jump_line));
    const bool clt_light = above(g1, 0.5) && above(g2, stable_ceiling) && below(g2, clt_line);
    const bool stable = above(g1, 0.5) && above(g2, std::max(small_jump_line, 0.0)) &&
                        below(g2, stable_ceiling);

    const int hits = int(clt_full) + int(clt_light) + int(stable);
    if (hits == 0) {
        r.fluctuation.tag = Fluctuation::Boundary;
    } else if (hits > 1) {
        r.fluctuation.tag = Fluctuation::Unclassified;
    } else if (clt_full) {
        r.fluctuation.tag = Fluctuation::CltFull;
    } else if (clt_light) {
        r.fluctuation.tag = Fluctuation::CltLightPart;
    } else {
        r.fluctuation.tag = Fluctuation::Stable;
        const double shift_line = 1.0 - a;
        if (on_line(g2, shift_line)) {
            r.fluctuation.branch = StableBranch::ShiftCompensatedBoundary;
        } else if (g2 < shift_line) {
            r.fluctuation.branch = StableBranch::ShiftCompensated;
        } else {
            r.fluctuation.branch = StableBranch::ShiftZero;
        }
    }

    // Laws of large numbers.
    const double lln_line = (1.0 - a) * g1;
    const bool lln_full = above(g2, lln_line) || below(g2, std::min(lln_line, small_jump_line));
    const bool lln_light = above(g2, 1.0 - a) && below(g2, lln_line);
    const bool lln_none = above(g2, std::max(small_jump_line, 0.0)) && below(g2, 1.0 - a);
    const int lln_hits = int(lln_full) + int(lln_light) + int(lln_none);
    if (lln_hits != 1) {
        r.lln = LlnRegime::Boundary;
    } else if (lln_full) {
        r.lln = LlnRegime::LlnFull;
    } else if (lln_light) {
        r.lln = LlnRegime::LlnLightPart;
    } else {
        r.lln = LlnRegime::None;
    }

    r.zone = zone_of(r.fluctuation.tag, r.lln);
    return r;
}

RegimeReport classify_heavy_mean(double a, double g1, double g2) {
    RegimeReport r;
    r.lln = LlnRegime::LlnFull;
    const double clt_line = (2.0 - a) * g1;
    const double lower = std::min(clt_line, 1.0 - a * g1);
    if (above(g2, clt_line) || below(g2, lower)) {
        r.fluctuation.tag = Fluctuation::CltFull;
    } else if (above(g2, lower) && below(g2, clt_line)) {
        r.fluctuation.tag = Fluctuation::Stable;
        r.fluctuation.branch = StableBranch::ShiftZero;
    } else {
        r.fluctuation.tag = Fluctuation::Boundary;
    }
    return r;
}

}  // namespace

std::string_view to_string(Fluctuation f) noexcept {
    switch (f) {
        case Fluctuation::CltFull: return "clt_full";
        case Fluctuation::CltLightPart: return "clt_light_part";
        case Fluctuation::Stable: return "stable";
        case Fluctuation::Boundary: return "boundary";
        case Fluctuation::Unclassified: return "unclassified";
    }
    return "unclassified";
}

std::string_view to_string(StableBranch b) noexcept {
    switch (b) {
        case StableBranch::ShiftZero: return "shift_zero";
        case StableBranch::ShiftCompensated: return "shift_compensated";
        case StableBranch::ShiftCompensatedBoundary: return "shift_compensated_boundary";
    }
    return "shift_zero";
}

std::string_view to_string(LlnRegime l) noexcept {
    switch (l) {
        case LlnRegime::LlnFull: return "lln_full";
        case LlnRegime::LlnLightPart: return "lln_light_part";
        case LlnRegime::None: return "none";
        case LlnRegime::Boundary: return "boundary";
    }
    return "boundary";
}

RegimeReport classify(double alpha, double gamma1, double gamma2) {
    const bool valid = std::isfinite(alpha) && std::isfinite(gamma1) && std::isfinite(gamma2) &&
                       alpha > 0.0 && alpha < 2.0 && gamma1 > 0.0 && gamma2 > 0.0;
    if (!valid) return RegimeReport{};
    if (alpha < 1.0) return classify_light_heavy(alpha, gamma1, gamma2);
    return classify_heavy_mean(alpha, gamma1, gamma2);
}

double stable_scale(const ModelParams& p, std::int64_t n) {
    return std::exp(std::log(static_cast<double>(n)) * (1.0 - p.gamma2()) / p.alpha());
}

NormalizationPlan normalization_plan(const ModelParams& p, const InstanceParams& inst,
                                     const RegimeReport& report) {
    const double n = static_cast<double>(inst.n());
    const double a = p.alpha();
    NormalizationPlan plan;
    switch (report.fluctuation.tag) {
        case Fluctuation::CltFull:
            plan.center = n * mean_z(p, inst);
            plan.scale = std::sqrt(n * var_z(p, inst));
            plan.limit = StdNormal{};
            return plan;
        case Fluctuation::CltLightPart:
            plan.center = n * mu1(1.0, p.lambda());
            plan.scale = std::sqrt(n) / p.lambda();
            plan.limit = StdNormal{};
            return plan;
        case Fluctuation::Stable: {
            const double beta = stable_scale(p, inst.n());
            plan.scale = beta;
            if (a >= 1.0) {
                plan.center = n * mean_z(p, inst);
                // (S_n - n E Z) / beta_n has mean zero in the limit when alpha > 1.
                const double shift = a > 1.0 ? -a / (a - 1.0) : 0.0;
                plan.limit = StableRef{StableLimitSpec{a, 1.0, shift}, true};
                return plan;
            }
            const double comp = a / (1.0 - a);
            const double light_mean = n * mu1(1.0, p.lambda());
            switch (report.fluctuation.branch.value_or(StableBranch::ShiftZero)) {
                case StableBranch::ShiftZero:
                    plan.center = light_mean;
                    plan.limit = StableRef{StableLimitSpec{a, 1.0, 0.0}, false};
                    break;
                case StableBranch::ShiftCompensatedBoundary:
                    plan.center = light_mean + comp * beta;
                    plan.limit = StableRef{StableLimitSpec{a, 1.0, -comp}, false};
                    break;
                case StableBranch::ShiftCompensated:
                    plan.center = comp * beta;
                    plan.limit = StableRef{StableLimitSpec{a, 1.0, -comp}, false};
                    break;
            }
            return plan;
        }
        case Fluctuation::Boundary:
        case Fluctuation::Unclassified:
            break;
    }
    throw NoTheoremError("no theorem applies: (alpha, gamma1, gamma2) is on a regime boundary");
}

}  // namespace mixlim
