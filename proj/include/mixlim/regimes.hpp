#ifndef MIXLIM_REGIMES_HPP
#define MIXLIM_REGIMES_HPP

#include "mixlim/model.hpp"
#include "mixlim/stable_limit.hpp"

#include <optional>
#include <string_view>
#include <variant>

namespace mixlim {

enum class Fluctuation { CltFull, CltLightPart, Stable, Boundary, Unclassified };

/// Which centering branch applies in the stable regime. For alpha >= 1 the
/// stable regime is always ShiftZero with center n E[Z].
enum class StableBranch { ShiftZero, ShiftCompensated, ShiftCompensatedBoundary };

struct FluctuationRegime {
    Fluctuation tag = Fluctuation::Unclassified;
    std::optional<StableBranch> branch;  // set iff tag == Stable
};

enum class LlnRegime { LlnFull, LlnLightPart, None, Boundary };

struct RegimeReport {
    FluctuationRegime fluctuation;
    LlnRegime lln = LlnRegime::Boundary;
    std::optional<int> zone;  // 1..6, alpha < 1 interior points only

    /// True when a limit theorem gives a normalization for this point.
    bool has_fluctuation_theorem() const noexcept {
        return fluctuation.tag != Fluctuation::Boundary &&
               fluctuation.tag != Fluctuation::Unclassified;
    }
};

std::string_view to_string(Fluctuation f) noexcept;
std::string_view to_string(StableBranch b) noexcept;
std::string_view to_string(LlnRegime l) noexcept;

/// Relative tolerance under which (gamma1, gamma2) counts as lying on one of
/// the defining lines.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Evaluates the strict inequalities of the limit theorems. Points on any
/// defining line are reported as Boundary for the affected regime.
RegimeReport classify(double alpha, double gamma1, double gamma2);

struct StdNormal {};

struct StableRef {
    StableLimitSpec spec;
    bool compensated = false;
};

using LimitLaw = std::variant<StdNormal, StableRef>;

/// (S_n - center) / scale converges to `limit`.
struct NormalizationPlan {
    double center = 0.0;
    double scale = 1.0;
    LimitLaw limit = StdNormal{};
};

/// Throws NoTheoremError for Boundary or Unclassified reports.
NormalizationPlan normalization_plan(const ModelParams& p, const InstanceParams& inst,
                                     const RegimeReport& report);

/// Stable scale n^{(1-gamma2)/alpha} (constant c = 1).
double stable_scale(const ModelParams& p, std::int64_t n);

}  // namespace mixlim

#endif  // MIXLIM_REGIMES_HPP
