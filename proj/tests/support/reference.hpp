#pragma once

// Reference implementations used only as test oracles. They share no code
// with the library's numerical paths.

#include <vector>

#include "mimoid/types.hpp"

namespace mimoid::reference {

struct EigenPairs {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // column i belongs to values[i]
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
EigenPairs jacobi_eigen(const ComplexMatrix& a, double tol = 1e-15, int max_sweeps = 100);

struct Radii {
    std::vector<double> R, mu, r;
    double mu_J = 0.0;
};

/// Compressed Gerschgorin radii evaluated directly with the Jacobi solver.
Radii brute_force_radii(const ComplexMatrix& cov);

}  // namespace mimoid::reference
