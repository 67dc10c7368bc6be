#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "mimoid/types.hpp"

namespace mimoid {

/// Seeded random source handed explicitly to every stochastic operation.
///
/// Wraps a 64-bit Mersenne twister; Gaussian draws use Box-Muller on the
/// engine directly so the sequence does not depend on distribution-object
/// caching.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed = 1);

    /// Independent stream for a tuple of indices (seed, a, b, ...).
    static RandomSource derive(std::uint64_t seed, std::initializer_list<std::uint64_t> indices);

    double uniform();                       ///< [0, 1)
    double uniform(double lo, double hi);
    double normal();                        ///< N(0, 1)
    cplx complex_normal(double variance);   ///< circular CN(0, variance)
    bool bit();
    std::uint64_t next();

    std::vector<std::uint8_t> bits(std::size_t count);
    ComplexMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mimoid
