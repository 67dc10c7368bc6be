#pragma once

#include <span>
#include <vector>

#include "mimoid/channel.hpp"
#include "mimoid/types.hpp"
#include "mimoid/windows.hpp"

namespace mimoid {

/// Compressed Gerschgorin radii of one covariance.
struct RadiiVector {
    WindowKind kind = WindowKind::Alpha;
    std::vector<double> R;   ///< compressed radii (μ_i/μ_J) r_i, length J-1
    std::vector<double> mu;  ///< eigenvalues of the leading (J-1) block, descending
    std::vector<double> r;   ///< raw radii |q_i^H a|
    double mu_J = 0.0;       ///< mean of mu

    std::size_t size() const { return R.size(); }
};

/// Window matrix W of `kind` over the columns of y (N_r x slots): the stacked
/// window vectors side by side, so that the estimator is W W^H / count.
/// Alpha puts y(l), y(l+1) side by side; count is the number of windows.
ComplexMatrix window_matrix(const ComplexMatrix& y, WindowKind kind);
RealMatrix real_window_matrix(const ComplexMatrix& y, WindowKind kind);

/// Sample covariance of one window kind over y (N_r x slots), slots truncated
/// to a multiple of 4. Needs at least 8 slots.
Covariance estimate_covariance(const ComplexMatrix& y, WindowKind kind);

/// Gerschgorin transform and radius compression. Input must be Hermitian
/// (real symmetric) to 1e-8; an all-zero matrix raises DegenerateInputError.
RadiiVector gerschgorin_radii(const Covariance& cov);
RadiiVector gerschgorin_radii(const ComplexMatrix& cov, WindowKind kind = WindowKind::Alpha);
RadiiVector gerschgorin_radii(const RealMatrix& cov, WindowKind kind = WindowKind::Gamma1);

/// Element-wise mean in input order. All inputs must share kind and length.
RadiiVector combine_detectors(std::span<const RadiiVector> detectors);

/// Windows of an SFBC-OFDM observation at subcarrier start l, one column group per
/// OFDM symbol: [Y_l(1), ..., Y_l(N_b)] for Alpha, [ȳ_l(1), ..., ȳ_l(N_b)] otherwise.
ComplexMatrix restructure_sfbc(const OfdmObservation& obs, WindowKind kind, std::size_t l);

/// Per-start covariance over the OFDM symbols of an SFBC observation.
Covariance sfbc_covariance(const OfdmObservation& obs, WindowKind kind, std::size_t l);

/// Groups four consecutive subcarriers into N/4 blocks, each N_r x 4N_b:
/// [y_k(1..N_b), y_{k+1}(1..N_b), y_{k+2}(1..N_b), y_{k+3}(1..N_b)].
std::vector<ComplexMatrix> group_stbc_ofdm(const OfdmObservation& obs);

}  // namespace mimoid
