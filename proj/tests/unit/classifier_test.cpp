#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mimoid/classifier.hpp"
#include "mimoid/rng.hpp"

namespace mimoid {
namespace {

TEST(Decide, ExactSignatureIsZeroDistance) {
    for (auto id : all_schemes()) {
        const auto d = decide(FeatureVector::from(signature(id)));
        EXPECT_EQ(d.scheme, id) << name(id);
        EXPECT_EQ(d.distance, 0.0);
        EXPECT_EQ(d.n_t, descriptor(id).n_t);
        EXPECT_EQ(d.ties, 0);
    }
}

TEST(Decide, AlamoutiNearMiss) {
    const FeatureVector f{2, {4, 4, 4}, {4.2, 4.1}};
    const auto d = decide(f);
    EXPECT_EQ(d.scheme, SchemeId::AL);
    EXPECT_NEAR(d.distance, 0.9, 1e-12);
    EXPECT_NEAR(weighted_distance(f, signature(SchemeId::SM2)), 23.1, 1e-12);
}

TEST(Decide, QuasiOrthogonalIsUnique) {
    const FeatureVector f{4, {8, 4, 8}, {8, 8}};
    const auto d = decide(f);
    EXPECT_EQ(d.scheme, SchemeId::QOSBC4);
    EXPECT_EQ(d.distance, 0.0);
    EXPECT_GT(d.ranking[1].second, 0.0);
}

TEST(Decide, RankingSortedAndComplete) {
    RandomSource rng(1);
    for (int t = 0; t < 100; ++t) {
        FeatureVector f{rng.uniform(0, 5), {rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0, 9)},
                        {rng.uniform(0, 17), rng.uniform(0, 17)}};
        const auto d = decide(f);
        ASSERT_EQ(d.ranking.size(), kSchemeCount);
        for (std::size_t i = 1; i < d.ranking.size(); ++i) EXPECT_LE(d.ranking[i - 1].second, d.ranking[i].second);
        EXPECT_EQ(d.ranking.front().first, d.scheme);
    }
}

TEST(Decide, TieGoesToRegistryOrder) {
    // The midpoint of two rows is equidistant from both.
    const auto a = signature(SchemeId::OSBC3_3);
    const auto b = signature(SchemeId::OSBC3_4);
    FeatureVector f = FeatureVector::from(a);
    const FeatureVector fb = FeatureVector::from(b);
    for (int i = 0; i < 3; ++i) f.beta[i] = 0.5 * (f.beta[i] + fb.beta[i]);
    for (int i = 0; i < 2; ++i) f.gamma[i] = 0.5 * (f.gamma[i] + fb.gamma[i]);
    f.alpha = 0.5 * (f.alpha + fb.alpha);
    const auto d = decide(f);
    if (d.ties > 0) {
        EXPECT_LT(index_of(d.scheme), index_of(d.ranking[1].first));
    }
    EXPECT_DOUBLE_EQ(weighted_distance(f, a), weighted_distance(f, b));
}

TEST(Decide, NonFiniteThrows) {
    FeatureVector f = FeatureVector::from(signature(SchemeId::AL));
    f.gamma[1] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(decide(f), ArgumentError);
    f.gamma[1] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(decide(f), ArgumentError);
}

TEST(Decide, CommonWeightScalingLeavesDecisionUnchanged) {
    RandomSource rng(2);
    const DecisionWeights w3{72, 12, 9};
    for (int t = 0; t < 200; ++t) {
        FeatureVector f{rng.uniform(0, 5), {rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0, 9)},
                        {rng.uniform(0, 17), rng.uniform(0, 17)}};
        EXPECT_EQ(decide(f).scheme, decide(f, w3).scheme);
    }
}

TEST(Separability, AllRowsDistinct) {
    const auto p = min_pairwise_distance();
    EXPECT_GT(p.distance, 0.0);
    for (auto a : all_schemes())
        for (auto b : all_schemes())
            if (a != b) {
                EXPECT_GE(weighted_distance(FeatureVector::from(signature(a)), signature(b)), p.distance);
            }
}

TEST(Score, AllCorrect) {
    std::vector<TrialOutcome> t;
    for (auto id : all_schemes())
        for (int i = 0; i < 3; ++i) t.push_back({id, id, descriptor(id).n_t});
    const auto s = score(t);
    EXPECT_EQ(s.pr1, 1.0);
    EXPECT_EQ(s.pr2, 1.0);
    EXPECT_TRUE(s.warnings.empty());
}

TEST(Score, AlamoutiAlwaysSpatialMultiplexing) {
    std::vector<TrialOutcome> t;
    for (auto id : all_schemes())
        for (int i = 0; i < 5; ++i) {
            const auto dec = id == SchemeId::AL ? SchemeId::SM2 : id;
            t.push_back({id, dec, descriptor(dec).n_t});
        }
    const auto s = score(t);
    EXPECT_DOUBLE_EQ(s.pr2, 16.0 / 17.0);
    EXPECT_EQ(s.pr1, 1.0);
    EXPECT_EQ(s.confusion[index_of(SchemeId::AL)][index_of(SchemeId::SM2)], 5u);
    EXPECT_EQ(s.scheme_accuracy(SchemeId::AL), 0.0);
}

TEST(Score, UniformRandomDecisions) {
    RandomSource rng(3);
    std::vector<TrialOutcome> t;
    for (int i = 0; i < 10000; ++i) {
        const auto truth = scheme_at(i % kSchemeCount);
        const auto dec = scheme_at(rng.next() % kSchemeCount);
        t.push_back({truth, dec, descriptor(dec).n_t});
    }
    EXPECT_NEAR(score(t).pr2, 1.0 / 17.0, 0.01);
}

TEST(Score, MissingClassesExcludedWithWarning) {
    std::vector<TrialOutcome> t{{SchemeId::AL, SchemeId::AL, 2}, {SchemeId::SM3, SchemeId::SM2, 2}};
    const auto s = score(t);
    EXPECT_DOUBLE_EQ(s.pr2, 0.5);
    EXPECT_DOUBLE_EQ(s.pr1, 0.5);
    EXPECT_FALSE(s.warnings.empty());
}

}  // namespace
}  // namespace mimoid
