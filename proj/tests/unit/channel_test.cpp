#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mimoid/channel.hpp"
#include "mimoid/harness.hpp"

namespace mimoid {
namespace {

ImpairmentSpec clean() { return {}; }

TEST(FlatChannel, FullColumnRankAndUnitVariance) {
    RandomSource rng(11);
    double p = 0.0;
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
        const auto h = FlatChannel::random(8, 4, rng);
        ASSERT_EQ(h.H.rows(), 8);
        ASSERT_EQ(h.H.cols(), 4);
        EXPECT_EQ(Eigen::FullPivLU<ComplexMatrix>(h.H).rank(), 4);
        p += h.H.squaredNorm() / 32.0;
    }
    EXPECT_NEAR(p / n, 1.0, 0.03);
}

TEST(ApplyFlat, IdentityImpairments) {
    RandomSource rng(1);
    const auto h = FlatChannel::random(4, 2, rng);
    const ComplexMatrix s = rng.complex_gaussian_matrix(2, 50);
    const auto y = apply_flat(h, s, clean(), std::numeric_limits<double>::infinity(), rng);
    EXPECT_LT((y - h.H * s).norm(), 1e-13);
}

TEST(ApplyFlat, TimingOffsetTwoPath) {
    RandomSource rng(2);
    const FlatChannel h{ComplexMatrix::Identity(2, 2)};
    const ComplexMatrix s = rng.complex_gaussian_matrix(2, 20);
    ImpairmentSpec imp;
    imp.zeta = 0.3;
    const auto y = apply_flat(h, s, imp, std::numeric_limits<double>::infinity(), rng);
    EXPECT_LT((y.col(0) - 0.7 * s.col(0)).norm(), 1e-14);
    for (int n = 1; n < 20; ++n) EXPECT_LT((y.col(n) - (0.7 * s.col(n) + 0.3 * s.col(n - 1))).norm(), 1e-14);
}

TEST(ApplyFlat, FrequencyOffsetRotatesSamples) {
    RandomSource rng(3);
    const FlatChannel h{ComplexMatrix::Identity(1, 1)};
    const ComplexMatrix s = ComplexMatrix::Ones(1, 10);
    ImpairmentSpec imp;
    imp.delta_f = 0.01;
    const auto y = apply_flat(h, s, imp, std::numeric_limits<double>::infinity(), rng);
    for (int n = 0; n < 10; ++n) EXPECT_NEAR(std::arg(y(0, n)), 2 * std::numbers::pi * 0.01 * n, 1e-12);
}

TEST(ApplyFlat, DimensionMismatchThrows) {
    RandomSource rng(4);
    const auto h = FlatChannel::random(4, 2, rng);
    EXPECT_THROW(apply_flat(h, ComplexMatrix::Ones(3, 10), clean(), 10, rng), ArgumentError);
}

TEST(ApplyFlat, SnrCalibration) {
    RandomSource rng(5);
    const double snr = 7.0;
    double sig = 0.0, noise = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = FlatChannel::random(4, 2, rng);
        const ComplexMatrix s = transmit_single_carrier(SchemeId::AL, 100, {}, rng);
        const auto y = apply_flat(h, s, clean(), snr, rng);
        const ComplexMatrix hs = h.H * s;
        sig += hs.squaredNorm();
        noise += (y - hs).squaredNorm();
    }
    EXPECT_NEAR(10.0 * std::log10(sig / noise), snr, 0.2);
}

double sample_variance(const ImpairmentSpec& imp, double sigma2, std::uint64_t seed) {
    RandomSource rng(seed);
    ComplexMatrix w = ComplexMatrix::Zero(1, 100000);
    add_noise(w, imp, sigma2, rng);
    return w.squaredNorm() / static_cast<double>(w.size());
}

TEST(Noise, MixtureWithZeroEpsilonIsGaussian) {
    ImpairmentSpec imp;
    imp.noise = MixtureNoise{0.0, 10.0};
    EXPECT_NEAR(sample_variance(imp, 0.5, 6), 0.5, 0.5 * 0.03);
}

TEST(Noise, MixtureTotalVariance) {
    ImpairmentSpec imp;
    imp.noise = MixtureNoise{0.05, 10.0};
    const double expect = (1 - 0.05) * 0.5 + 0.05 * 10 * 0.5;
    EXPECT_NEAR(sample_variance(imp, 0.5, 7), expect, expect * 0.03);
}

TEST(Noise, InvalidMixtureRejected) {
    ImpairmentSpec imp;
    imp.noise = MixtureNoise{1.5, 10.0};
    EXPECT_THROW(imp.validate(), ArgumentError);
    imp.noise = MixtureNoise{0.1, 0.5};
    EXPECT_THROW(imp.validate(), ArgumentError);
}

TEST(Doppler, ZeroDopplerIsStatic) {
    RandomSource rng(8);
    const auto h0 = FlatChannel::random(3, 2, rng);
    for (double n : {0.0, 1.0, 1000.0}) EXPECT_EQ(doppler_evolve(h0, 0.0, n, rng).H, h0.H);
}

TEST(Doppler, StartsAtH0) {
    RandomSource rng(9);
    const auto h0 = FlatChannel::random(3, 2, rng);
    const DopplerProcess p(h0.H, 1e-3, rng);
    EXPECT_LT((p.at(0.0) - h0.H).norm(), 1e-12);
}

TEST(Doppler, BesselAutocorrelation) {
    RandomSource rng(10);
    const double fd = 1e-4;
    const double lag = 100.0;
    const int n = 10000;
    cplx corr = 0.0;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto h0 = FlatChannel::random(1, 1, rng);
        const DopplerProcess p(h0.H, fd, rng);
        const cplx a = p.at(500.0)(0, 0);
        const cplx b = p.at(500.0 + lag)(0, 0);
        corr += a * std::conj(b);
        var += std::norm(a);
    }
    const double j0 = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * lag);
    EXPECT_NEAR(corr.real() / n, j0, 0.05);
    EXPECT_NEAR(var / n, 1.0, 0.03);
}

TEST(Doppler, LargeLagDecorrelates) {
    RandomSource rng(12);
    const double fd = 1e-2;
    cplx corr = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto h0 = FlatChannel::random(1, 1, rng);
        const DopplerProcess p(h0.H, fd, rng);
        corr += p.at(1000.0)(0, 0) * std::conj(p.at(1024.05)(0, 0));
    }
    // 2π f_d Δn = 1.5085 is near a region where J0 ≈ 0.5
    EXPECT_NEAR(corr.real() / n, std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * 24.05), 0.05);
}

TEST(Selective, PowerDelayProfileNormalized) {
    const auto p = SelectiveChannel::exponential_pdp(4);
    double s = 0.0;
    for (double v : p) s += v;
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_NEAR(p[1] / p[0], std::exp(-0.2), 1e-15);
}

TxFrame random_frame(int n_t, int n, int cp, int nb, RandomSource& rng) {
    std::vector<ComplexMatrix> grid;
    for (int a = 0; a < n_t; ++a) grid.push_back(rng.complex_gaussian_matrix(n, nb));
    TxFrame f;
    f.variant = SystemVariant::StbcOfdm;
    f.ofdm = {n, cp, nb};
    f.samples = ofdm_modulate(grid, cp);
    return f;
}

TEST(Selective, SubcarrierResponseMatchesTapFft) {
    RandomSource rng(13);
    const int n = 64, nb = 3;
    const auto ch = SelectiveChannel::random(3, 2, rng, 4);
    std::vector<ComplexMatrix> grid{rng.complex_gaussian_matrix(n, nb), rng.complex_gaussian_matrix(n, nb)};
    TxFrame f{SystemVariant::StbcOfdm, ofdm_modulate(grid, 10), {n, 10, nb}};
    const auto obs = apply_selective_ofdm(ch, f, clean(), std::numeric_limits<double>::infinity(), rng);
    EXPECT_FALSE(obs.cp_too_short);
    for (int k = 0; k < n; ++k) {
        const ComplexMatrix hk = ch.frequency_response(k, n);
        for (int s = 1; s < nb; ++s) {
            ComplexVector x(2);
            x << grid[0](k, s), grid[1](k, s);
            const ComplexVector want = hk * x;
            EXPECT_LE((obs.subcarriers[static_cast<std::size_t>(k)].col(s) - want).norm(), 1e-9 * want.norm());
        }
    }
}

TEST(Selective, SingleTapMatchesFlat) {
    RandomSource rng(14);
    const int n = 16, nb = 4;
    const auto ch = SelectiveChannel::random(2, 2, rng, 1);
    const auto f = random_frame(2, n, 2, nb, rng);
    const auto obs = apply_selective_ofdm(ch, f, clean(), std::numeric_limits<double>::infinity(), rng);
    const auto td = apply_flat(FlatChannel{ch.taps[0]}, f.samples, clean(), std::numeric_limits<double>::infinity(), rng);
    const auto flat = ofdm_demodulate(td, f.ofdm);
    for (int k = 0; k < n; ++k)
        EXPECT_LT((obs.subcarriers[static_cast<std::size_t>(k)] - flat.subcarriers[static_cast<std::size_t>(k)]).norm(), 1e-9);
}

TEST(Selective, ShortCyclicPrefixIsFlagged) {
    RandomSource rng(15);
    const auto ch = SelectiveChannel::random(2, 1, rng, 4);
    const auto f = random_frame(1, 16, 2, 2, rng);
    EXPECT_TRUE(apply_selective_ofdm(ch, f, clean(), 10.0, rng).cp_too_short);
}

TEST(Selective, AdjacentSubcarriersAreSimilar) {
    RandomSource rng(16);
    const int n = 64;
    double sum = 0.0, worst = 0.0;
    int count = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto ch = SelectiveChannel::random(4, 2, rng, 3);
        for (int k = 0; k + 3 < n; ++k) {
            const ComplexMatrix a = ch.frequency_response(k, n);
            const double rel = (ch.frequency_response(k + 3, n) - a).norm() / a.norm();
            sum += rel;
            worst = std::max(worst, rel);
            ++count;
        }
    }
    RecordProperty("mean_relative_change", std::to_string(sum / count));
    RecordProperty("max_relative_change", std::to_string(worst));
    // Expected value is about 0.34 for the normalized three-tap profile.
    EXPECT_LT(sum / count, 0.5);
}

}  // namespace
}  // namespace mimoid
