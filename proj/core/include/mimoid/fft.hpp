#pragma once

#include <span>

#include "mimoid/types.hpp"

namespace mimoid::fft {

/// Unitary DFT, X[k] = N^{-1/2} Σ x[n] e^{-j2πkn/N}. In-place over `data`.
void forward(std::span<cplx> data);

/// Unitary inverse DFT, x[n] = N^{-1/2} Σ X[k] e^{+j2πkn/N}. In-place over `data`.
void inverse(std::span<cplx> data);

}  // namespace mimoid::fft
