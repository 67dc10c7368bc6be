#include "mimoid/rng.hpp"

#include <cmath>
#include <numbers>

namespace mimoid {

RandomSource::RandomSource(std::uint64_t seed) : engine_(seed) {}

RandomSource RandomSource::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> indices) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * indices.size());
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto idx : indices) push(idx);
    std::seed_seq seq(words.begin(), words.end());
    std::uint32_t state[2];
    seq.generate(state, state + 2);
    return RandomSource((static_cast<std::uint64_t>(state[1]) << 32) | state[0]);
}

std::uint64_t RandomSource::next() { return engine_(); }

double RandomSource::uniform() {
    // 53 random mantissa bits.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RandomSource::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
}

cplx RandomSource::complex_normal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

bool RandomSource::bit() { return (engine_() >> 63) != 0; }

std::vector<std::uint8_t> RandomSource::bits(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0) word = engine_();
        out[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return out;
}

ComplexMatrix RandomSource::complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = complex_normal(variance);
    return m;
}

}  // namespace mimoid
