#include <gtest/gtest.h>

#include <cmath>

#include "mimoid/schemes.hpp"
#include "mimoid/windows.hpp"

namespace mimoid {
namespace {

std::vector<cplx> unit_symbols(std::size_t n) {
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<cplx> x;
    for (std::size_t i = 0; i < n; ++i) x.emplace_back(i % 2 ? h : -h, i % 3 ? h : -h);
    return x;
}

TEST(Schemes, RegistryHasSeventeenRows) {
    EXPECT_EQ(scheme_registry().size(), 17u);
    for (std::size_t i = 0; i < kSchemeCount; ++i) EXPECT_EQ(index_of(scheme_at(i)), i);
}

TEST(Schemes, DescriptorInvariants) {
    for (const auto& d : scheme_registry()) {
        SCOPED_TRACE(std::string(d.name));
        EXPECT_GE(d.n_t, 1);
        EXPECT_LE(d.n_t, 4);
        EXPECT_GE(d.block_len, 1);
        EXPECT_EQ(d.signature.alpha, d.n_t);
        EXPECT_EQ(static_cast<long>(d.symbols_per_block) * d.rate_den, static_cast<long>(d.block_len) * d.rate_num);
        for (int b : d.signature.beta) {
            EXPECT_GT(b, 0);
            EXPECT_LE(b, 4 * d.n_t);
        }
        for (int g : d.signature.gamma) {
            EXPECT_GT(g, 0);
            EXPECT_LE(g, 4 * d.n_t);
        }
        const auto c = codeword(d.id, unit_symbols(static_cast<std::size_t>(d.symbols_per_block)));
        EXPECT_EQ(c.rows(), d.n_t);
        EXPECT_EQ(c.cols(), d.block_len);
    }
}

TEST(Schemes, AlamoutiCodeword) {
    const std::vector<cplx> x{{1, 1}, {2, -1}};
    const auto c = codeword(SchemeId::AL, x);
    EXPECT_EQ(c(0, 0), cplx(1, 1));
    EXPECT_EQ(c(0, 1), cplx(-2, -1));
    EXPECT_EQ(c(1, 0), cplx(2, -1));
    EXPECT_EQ(c(1, 1), cplx(1, -1));
}

TEST(Schemes, SpatialMultiplexingIsAColumn) {
    const std::vector<cplx> x{{0.5, 1}, {-3, 2}};
    const auto c = codeword(SchemeId::SM2, x);
    ASSERT_EQ(c.rows(), 2);
    ASSERT_EQ(c.cols(), 1);
    EXPECT_EQ(c(0, 0), x[0]);
    EXPECT_EQ(c(1, 0), x[1]);
}

TEST(Schemes, FstdRowEnergy) {
    const std::vector<cplx> x(4, cplx(1, 0));
    const auto c = codeword(SchemeId::FSTD, x);
    for (Eigen::Index a = 0; a < 4; ++a) EXPECT_NEAR(c.row(a).squaredNorm(), 2.0, 1e-15);
}

TEST(Schemes, WrongSymbolCountThrows) {
    EXPECT_THROW(codeword(SchemeId::AL, unit_symbols(3)), ArgumentError);
    EXPECT_THROW(codeword(SchemeId::OSBC3_1, unit_symbols(3)), ArgumentError);
}

TEST(Schemes, SignatureRows) {
    EXPECT_EQ(signature(SchemeId::AL), (FeatureSignature{2, {4, 4, 4}, {4, 4}}));
    EXPECT_EQ(signature(SchemeId::FSTD), (FeatureSignature{4, {4, 4, 4}, {4, 4}}));
    EXPECT_EQ(signature(SchemeId::OSBC3_2), (FeatureSignature{3, {3, 5, 5}, {6, 6}}));
}

TEST(Schemes, VerifySignatureExamples) {
    EXPECT_EQ(verify_signature(SchemeId::AL, 1.0), signature(SchemeId::AL));
    EXPECT_EQ(verify_signature(SchemeId::SingleAntenna, 1.0), (FeatureSignature{1, {2, 2, 2}, {4, 4}}));
    const auto q = verify_signature(SchemeId::QOSBC4, 1.0);
    EXPECT_EQ(q.beta[1], 4);
    EXPECT_EQ(q.beta[0], 8);
    EXPECT_EQ(q.beta[2], 8);
}

TEST(Schemes, VerifySignatureIndependentOfSymbolScale) {
    for (auto id : all_schemes()) EXPECT_EQ(verify_signature(id, 0.3), signature(id)) << name(id);
}

TEST(Schemes, AlphaWindowCovarianceHasRankNt) {
    for (auto id : all_schemes())
        EXPECT_EQ(exact_transmit_covariance(id, WindowKind::Alpha, 1.0).rank(), descriptor(id).n_t) << name(id);
}

TEST(Schemes, OrthogonalDesignsAreOrthogonal) {
    const std::vector<cplx> pool{{0.6, -0.8}, {-0.28, 0.96}, {1, 0}, {0, -1}, {0.8, 0.6}, {-0.96, -0.28}};
    for (auto id : {SchemeId::AL, SchemeId::OSBC3_1, SchemeId::OSBC3_2, SchemeId::OSBC3_3, SchemeId::OSBC3_4,
                    SchemeId::OSBC4_1, SchemeId::FSTD}) {
        const auto& d = descriptor(id);
        std::vector<cplx> x(pool.begin(), pool.begin() + d.symbols_per_block);
        const ComplexMatrix g = codeword(id, x) * codeword(id, x).adjoint();
        const cplx s = g(0, 0);
        EXPECT_LT((g - s * ComplexMatrix::Identity(d.n_t, d.n_t)).norm(), 1e-12) << name(id);
    }
}

TEST(Schemes, PowerScaleGivesUnitSlotPower) {
    for (auto id : all_schemes()) {
        const double p = mean_slot_power(id) * power_scale(id) * power_scale(id);
        EXPECT_NEAR(p, 1.0, 1e-12) << name(id);
        EXPECT_TRUE(std::isfinite(mean_slot_power(id)));
    }
}

TEST(Schemes, ParseAcceptsAliases) {
    EXPECT_EQ(parse_scheme("AL"), SchemeId::AL);
    EXPECT_EQ(parse_scheme("QOSBC"), SchemeId::QOSBC4);
    EXPECT_FALSE(parse_scheme("nope").has_value());
}

}  // namespace
}  // namespace mimoid
