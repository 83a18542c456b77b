#include "mixlim/errors.hpp"
#include "mixlim/model.hpp"
#include "mixlim/regimes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

using namespace mixlim;

namespace {

// Hand-written transcription of the published inequalities for alpha < 1,
// used as an oracle for interior points.
struct Expected {
    Fluctuation f;
    LlnRegime l;
};

Expected expected_light_heavy(double a, double g1, double g2) {
    Expected e{Fluctuation::Unclassified, LlnRegime::Boundary};
    if (g2 > (2 - a) * g1 || g2 < std::min((2 - a) * g1, 1 - a * g1))
        e.f = Fluctuation::CltFull;
    else if (g1 > 0.5 && g2 > 1 - a / 2 && g2 < (2 - a) * g1)
        e.f = Fluctuation::CltLightPart;
    else if (g1 > 0.5 && g2 > std::max(1 - a * g1, 0.0) && g2 < 1 - a / 2)
        e.f = Fluctuation::Stable;
    if (g2 > (1 - a) * g1 || g2 < std::min((1 - a) * g1, 1 - a * g1))
        e.l = LlnRegime::LlnFull;
    else if (g2 > 1 - a && g2 < (1 - a) * g1)
        e.l = LlnRegime::LlnLightPart;
    else if (g2 > std::max(1 - a * g1, 0.0) && g2 < 1 - a)
        e.l = LlnRegime::None;
    return e;
}

bool near_line(double a, double g1, double g2) {
    const double lines[] = {(2 - a) * g1, 1 - a * g1, 1 - a / 2, (1 - a) * g1, 1 - a};
    for (double v : lines)
        if (std::abs(g2 - v) < 1e-9) return true;
    return std::abs(g1 - 0.5) < 1e-9;
}

}  // namespace

TEST(Classify, SpotChecks) {
    auto r = classify(0.5, 1, 2);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::CltFull);
    EXPECT_EQ(r.lln, LlnRegime::LlnFull);
    EXPECT_EQ(r.zone, 1);

    r = classify(0.5, 2, 0.6);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::Stable);
    EXPECT_EQ(r.fluctuation.branch, StableBranch::ShiftZero);
    EXPECT_EQ(r.lln, LlnRegime::LlnLightPart);
    EXPECT_EQ(r.zone, 4);

    r = classify(0.5, 2, 0.3);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::Stable);
    EXPECT_EQ(r.fluctuation.branch, StableBranch::ShiftCompensated);
    EXPECT_EQ(r.lln, LlnRegime::None);
    EXPECT_EQ(r.zone, 5);

    r = classify(0.5, 0.6, 0.72);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::Stable);
    EXPECT_EQ(r.fluctuation.branch, StableBranch::ShiftZero);
    EXPECT_EQ(r.lln, LlnRegime::LlnFull);
    EXPECT_EQ(r.zone, 6);

    r = classify(0.5, 1, 1.5);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::Boundary);
    EXPECT_FALSE(r.has_fluctuation_theorem());
    EXPECT_FALSE(r.zone.has_value());

    r = classify(1.5, 2, 0.5);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::Stable);
    EXPECT_EQ(r.fluctuation.branch, StableBranch::ShiftZero);
    EXPECT_EQ(r.lln, LlnRegime::LlnFull);
    EXPECT_FALSE(r.zone.has_value());
}

TEST(Classify, ZonesTwoAndThree) {
    auto r = classify(0.5, 1, 1.3);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::CltLightPart);
    EXPECT_EQ(r.zone, 2);
    r = classify(0.5, 2, 0.9);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::CltLightPart);
    EXPECT_EQ(r.lln, LlnRegime::LlnLightPart);
    EXPECT_EQ(r.zone, 3);
}

TEST(Classify, CompensatedBoundaryBranch) {
    const auto r = classify(0.5, 2, 0.5);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::Stable);
    EXPECT_EQ(r.fluctuation.branch, StableBranch::ShiftCompensatedBoundary);
    EXPECT_EQ(r.lln, LlnRegime::Boundary);
}

TEST(Classify, CltBelowSmallJumpLine) {
    const auto r = classify(0.5, 0.6, 0.5);
    EXPECT_EQ(r.fluctuation.tag, Fluctuation::CltFull);
}

TEST(Classify, PartitionOnGrid) {
    const double a = 0.5;
    std::set<int> zones;
    for (int i = 1; i <= 200; ++i) {
        for (int j = 1; j <= 200; ++j) {
            const double g1 = 3.0 * i / 200.0;
            const double g2 = 3.0 * j / 200.0;
            const auto r = classify(a, g1, g2);
            EXPECT_NE(r.fluctuation.tag, Fluctuation::Unclassified);
            if (near_line(a, g1, g2)) continue;
            const Expected e = expected_light_heavy(a, g1, g2);
            ASSERT_EQ(r.fluctuation.tag, e.f) << g1 << "," << g2;
            ASSERT_EQ(r.lln, e.l) << g1 << "," << g2;
            ASSERT_TRUE(r.zone.has_value()) << g1 << "," << g2;
            EXPECT_GE(*r.zone, 1);
            EXPECT_LE(*r.zone, 6);
            zones.insert(*r.zone);
        }
    }
    EXPECT_EQ(zones.size(), 6u);
}

TEST(Classify, ZoneMatchesRegimePair) {
    for (int i = 1; i <= 60; ++i) {
        for (int j = 1; j <= 60; ++j) {
            const auto r = classify(0.3, 0.05 * i, 0.05 * j);
            if (!r.zone) continue;
            const auto f = r.fluctuation.tag;
            const auto l = r.lln;
            switch (*r.zone) {
                case 1: EXPECT_TRUE(f == Fluctuation::CltFull && l == LlnRegime::LlnFull); break;
                case 2: EXPECT_TRUE(f == Fluctuation::CltLightPart && l == LlnRegime::LlnFull); break;
                case 3: EXPECT_TRUE(f == Fluctuation::CltLightPart && l == LlnRegime::LlnLightPart); break;
                case 4: EXPECT_TRUE(f == Fluctuation::Stable && l == LlnRegime::LlnLightPart); break;
                case 5: EXPECT_TRUE(f == Fluctuation::Stable && l == LlnRegime::None); break;
                case 6: EXPECT_TRUE(f == Fluctuation::Stable && l == LlnRegime::LlnFull); break;
                default: ADD_FAILURE();
            }
        }
    }
}

TEST(Classify, MonotoneFrontier) {
    for (double a : {0.3, 0.5, 0.8}) {
        for (double g1 : {1.0 / a + 0.1, 1.0 / a + 0.5, 1.0 / a + 1.0}) {
            const double low = 1 - a / 2;
            const double high = (2 - a) * g1;
            ASSERT_GT(high, low);
            std::vector<Fluctuation> seen;
            for (int k = 1; k <= 4000; ++k) {
                const double g2 = 4.0 * g1 * k / 4000.0;
                const auto t = classify(a, g1, g2).fluctuation.tag;
                if (t == Fluctuation::Boundary) continue;
                if (g2 < low) EXPECT_EQ(t, Fluctuation::Stable);
                else if (g2 < high) EXPECT_EQ(t, Fluctuation::CltLightPart);
                else EXPECT_EQ(t, Fluctuation::CltFull);
                if (seen.empty() || seen.back() != t) seen.push_back(t);
            }
            EXPECT_EQ(seen, (std::vector<Fluctuation>{Fluctuation::Stable, Fluctuation::CltLightPart,
                                                      Fluctuation::CltFull}));
        }
    }
}

TEST(Classify, HeavyMeanAlwaysHasFullLln) {
    for (double a : {1.0, 1.2, 1.5, 1.9}) {
        for (int i = 1; i <= 40; ++i) {
            for (int j = 1; j <= 40; ++j) {
                const auto r = classify(a, 0.075 * i, 0.075 * j);
                EXPECT_EQ(r.lln, LlnRegime::LlnFull);
                EXPECT_FALSE(r.zone.has_value());
                EXPECT_NE(r.fluctuation.tag, Fluctuation::CltLightPart);
            }
        }
    }
}

TEST(Classify, InvalidInputIsUnclassified) {
    EXPECT_EQ(classify(2.5, 1, 1).fluctuation.tag, Fluctuation::Unclassified);
    EXPECT_EQ(classify(0.5, -1, 1).fluctuation.tag, Fluctuation::Unclassified);
}

TEST(Strings, StableNames) {
    EXPECT_EQ(to_string(Fluctuation::CltFull), "clt_full");
    EXPECT_EQ(to_string(Fluctuation::CltLightPart), "clt_light_part");
    EXPECT_EQ(to_string(Fluctuation::Stable), "stable");
    EXPECT_EQ(to_string(Fluctuation::Boundary), "boundary");
    EXPECT_EQ(to_string(LlnRegime::LlnFull), "lln_full");
    EXPECT_EQ(to_string(LlnRegime::LlnLightPart), "lln_light_part");
    EXPECT_EQ(to_string(LlnRegime::None), "none");
    EXPECT_EQ(to_string(StableBranch::ShiftZero), "shift_zero");
}

TEST(NormalizationPlan, ZoneOne) {
    const ModelParams p(0.5, 1, 1, 2);
    const auto inst = derive_instance(p, 10000);
    const auto plan = normalization_plan(p, inst, classify(0.5, 1, 2));
    EXPECT_DOUBLE_EQ(plan.center, 1e4 * mean_z(p, inst));
    EXPECT_DOUBLE_EQ(plan.scale, std::sqrt(1e4 * var_z(p, inst)));
    EXPECT_TRUE(std::holds_alternative<StdNormal>(plan.limit));
}

TEST(NormalizationPlan, LightPartClt) {
    const ModelParams p(0.5, 2, 1, 1.3);
    const auto inst = derive_instance(p, 10000);
    const auto plan = normalization_plan(p, inst, classify(0.5, 1, 1.3));
    EXPECT_DOUBLE_EQ(plan.center, 1e4 * 0.5);
    EXPECT_DOUBLE_EQ(plan.scale, std::sqrt(1e4 / 4.0));
}

TEST(NormalizationPlan, StableShiftZero) {
    const ModelParams p(0.5, 1, 2, 0.6);
    const auto plan = normalization_plan(p, derive_instance(p, 100000), classify(0.5, 2, 0.6));
    EXPECT_NEAR(plan.center, 1e5, 1e-9);
    EXPECT_NEAR(plan.scale, 1e4, 1e-8);
    const auto& ref = std::get<StableRef>(plan.limit);
    EXPECT_EQ(ref.spec.alpha, 0.5);
    EXPECT_EQ(ref.spec.shift, 0.0);
    EXPECT_FALSE(ref.compensated);
}

TEST(NormalizationPlan, StableShiftCompensated) {
    const ModelParams p(0.5, 1, 2, 0.3);
    const auto plan = normalization_plan(p, derive_instance(p, 100000), classify(0.5, 2, 0.3));
    EXPECT_NEAR(plan.center, 1e7, 1e-3);
    EXPECT_NEAR(plan.scale, 1e7, 1e-3);
    const auto& ref = std::get<StableRef>(plan.limit);
    EXPECT_DOUBLE_EQ(ref.spec.shift, -1.0);
    EXPECT_FALSE(ref.compensated);
}

TEST(NormalizationPlan, HeavyMeanStable) {
    const ModelParams p(1.5, 1, 2, 0.5);
    const auto inst = derive_instance(p, 1000000);
    const auto plan = normalization_plan(p, inst, classify(1.5, 2, 0.5));
    EXPECT_DOUBLE_EQ(plan.center, 1e6 * mean_z(p, inst));
    EXPECT_NEAR(plan.scale, 1e2, 1e-10);
    const auto& ref = std::get<StableRef>(plan.limit);
    EXPECT_TRUE(ref.compensated);
    EXPECT_DOUBLE_EQ(ref.spec.shift, -3.0);
}

TEST(NormalizationPlan, BoundaryThrows) {
    const ModelParams p(0.5, 1, 1, 1.5);
    EXPECT_THROW(normalization_plan(p, derive_instance(p, 1000), classify(0.5, 1, 1.5)),
                 NoTheoremError);
}

TEST(NormalizationPlan, ScalePositiveAndCenterFinite) {
    for (double a : {0.3, 0.5, 0.8, 1.0, 1.5, 1.9}) {
        for (int i = 1; i <= 10; ++i) {
            for (int j = 1; j <= 10; ++j) {
                const double g1 = 0.3 * i, g2 = 0.3 * j;
                const auto r = classify(a, g1, g2);
                if (!r.has_fluctuation_theorem()) continue;
                const ModelParams p(a, 1, g1, g2);
                for (std::int64_t n : {100, 100000000}) {
                    const auto plan = normalization_plan(p, derive_instance(p, n), r);
                    EXPECT_GT(plan.scale, 0.0);
                    EXPECT_TRUE(std::isfinite(plan.scale));
                    EXPECT_TRUE(std::isfinite(plan.center));
                }
            }
        }
    }
}
