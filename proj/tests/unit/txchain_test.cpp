#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "mimoid/fft.hpp"
#include "mimoid/rng.hpp"
#include "mimoid/txchain.hpp"

namespace mimoid {
namespace {

TEST(Modulate, FirstQpskPoint) {
    const std::vector<std::uint8_t> bits{0, 0};
    const auto s = modulate(bits, ModulationSpec::parse("4PSK"));
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s[0].imag(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Modulate, ConstellationsHaveUnitPower) {
    for (const char* m : {"4PSK", "8PSK", "16QAM", "64QAM"}) {
        const auto pts = constellation(ModulationSpec::parse(m));
        double p = 0.0;
        for (auto c : pts) p += std::norm(c);
        EXPECT_NEAR(p / static_cast<double>(pts.size()), 1.0, 1e-12) << m;
    }
}

TEST(Modulate, GrayNeighboursDifferInOneBit) {
    const auto spec = ModulationSpec::parse("16QAM");
    const auto pts = constellation(spec);
    const double dmin = 2.0 / std::sqrt(10.0);
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            if (std::abs(std::abs(pts[a] - pts[b]) - dmin) < 1e-9) EXPECT_EQ(std::popcount(a ^ b), 1);
}

TEST(Modulate, EmpiricalPower) {
    RandomSource rng(7);
    const auto bits = rng.bits(20000);
    const auto s = modulate(bits, ModulationSpec::parse("4PSK"));
    double p = 0.0;
    for (auto c : s) p += std::norm(c);
    EXPECT_NEAR(p / static_cast<double>(s.size()), 1.0, 0.02);
}

TEST(Modulate, BadLengthThrows) {
    const std::vector<std::uint8_t> bits{0, 1, 1};
    EXPECT_THROW(modulate(bits, ModulationSpec::parse("16QAM")), ArgumentError);
}

TEST(EncodeStream, ConcatenatesCodewords) {
    const std::vector<cplx> s{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const auto m = encode_stream(SchemeId::AL, s);
    ASSERT_EQ(m.rows(), 2);
    ASSERT_EQ(m.cols(), 4);
    EXPECT_EQ(m.leftCols(2), codeword(SchemeId::AL, std::span(s).first(2)));
    EXPECT_EQ(m.rightCols(2), codeword(SchemeId::AL, std::span(s).last(2)));
}

TEST(EncodeStream, SingleAntennaIsARow) {
    const std::vector<cplx> s{{1, 0}, {0, 1}, {-1, 0}};
    const auto m = encode_stream(SchemeId::SingleAntenna, s);
    ASSERT_EQ(m.rows(), 1);
    ASSERT_EQ(m.cols(), 3);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(m(0, i), s[static_cast<std::size_t>(i)]);
}

TEST(EncodeStream, FstdSilentAntennas) {
    const std::vector<cplx> s(8, cplx(1, 1));
    const auto m = encode_stream(SchemeId::FSTD, s);
    ASSERT_EQ(m.rows(), 4);
    ASSERT_EQ(m.cols(), 8);
    // Antennas 2 and 4 are silent on slots 1, 2, 5, 6 (1-based).
    for (int slot : {0, 1, 4, 5}) {
        EXPECT_EQ(m(1, slot), cplx(0, 0));
        EXPECT_EQ(m(3, slot), cplx(0, 0));
        EXPECT_NE(m(0, slot), cplx(0, 0));
    }
}

TEST(EncodeStream, DivisibilityThrows) {
    const std::vector<cplx> s(3, cplx(1, 0));
    EXPECT_THROW(encode_stream(SchemeId::AL, s), ArgumentError);
}

TEST(Ofdm, DeltaSubcarrier) {
    std::vector<ComplexMatrix> grid{ComplexMatrix::Zero(4, 1)};
    grid[0](1, 0) = 1.0;
    const auto t = ofdm_modulate(grid, 1);
    ASSERT_EQ(t.cols(), 5);
    for (int n = 0; n < 4; ++n) {
        const double ph = 2.0 * M_PI * n / 4.0;
        EXPECT_NEAR(std::abs(t(0, 1 + n) - 0.5 * cplx(std::cos(ph), std::sin(ph))), 0.0, 1e-15);
    }
    EXPECT_EQ(t(0, 0), t(0, 4));
}

TEST(Ofdm, SfbcAlamoutiMapping) {
    const std::vector<cplx> x{{1, 2}, {3, -1}, {0.5, 0}, {0, 0.5}};
    const auto g = ofdm_grid(SystemVariant::SfbcOfdm, SchemeId::AL, x, 4, 1);
    EXPECT_EQ(g[0](0, 0), x[0]);
    EXPECT_EQ(g[0](1, 0), -std::conj(x[1]));
    EXPECT_EQ(g[1](0, 0), x[1]);
    EXPECT_EQ(g[1](1, 0), std::conj(x[0]));
}

TEST(Ofdm, StbcAlamoutiMapping) {
    std::vector<cplx> x;
    for (int i = 0; i < 8; ++i) x.emplace_back(i + 1, -i);
    const auto g = ofdm_grid(SystemVariant::StbcOfdm, SchemeId::AL, x, 4, 2);
    for (int k = 0; k < 4; ++k) {
        const cplx x0 = x[static_cast<std::size_t>(2 * k)];
        const cplx x1 = x[static_cast<std::size_t>(2 * k + 1)];
        EXPECT_EQ(g[0](k, 0), x0);
        EXPECT_EQ(g[0](k, 1), -std::conj(x1));
        EXPECT_EQ(g[1](k, 0), x1);
    }
}

TEST(Ofdm, SfbcNeedsDivisibleSubcarriers) {
    const std::vector<cplx> x(64, cplx(1, 0));
    EXPECT_THROW(frame_ofdm(SystemVariant::SfbcOfdm, SchemeId::OSBC3_1, x, 12, 2, 1), ArgumentError);
}

TEST(Ofdm, RoundTripRecoversGrid) {
    RandomSource rng(3);
    const int n = 32, nb = 6, cp = 4;
    const auto bits = rng.bits(2 * ofdm_symbols_needed(SystemVariant::StbcOfdm, SchemeId::OSBC3_2, n, nb));
    const auto sym = modulate(bits, {});
    const auto grid = ofdm_grid(SystemVariant::StbcOfdm, SchemeId::OSBC3_2, sym, n, nb);
    const auto frame = frame_ofdm(SystemVariant::StbcOfdm, SchemeId::OSBC3_2, sym, n, cp, nb);
    ASSERT_EQ(frame.samples.cols(), nb * (n + cp));
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (int s = 0; s < nb; ++s) {
            std::vector<cplx> buf(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = frame.samples(static_cast<Eigen::Index>(a), s * (n + cp) + cp + i);
            fft::forward(buf);
            for (int k = 0; k < n; ++k) {
                const cplx want = grid[a](k, s);
                EXPECT_LE(std::abs(buf[static_cast<std::size_t>(k)] - want), 1e-10 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST(Ofdm, EncodingIsDeterministic) {
    const std::vector<cplx> x{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    EXPECT_EQ(encode_stream(SchemeId::AL, x), encode_stream(SchemeId::AL, x));
}

}  // namespace
}  // namespace mimoid
