#pragma once

#include <array>
#include <string_view>
#include <variant>
#include <vector>

#include "mimoid/schemes.hpp"
#include "mimoid/types.hpp"

namespace mimoid {

/// Sliding-window restructurings of the received stream. Offsets are
/// 0-based window starts; a window always spans two consecutive samples
/// along the slot (or subcarrier) axis.
///
///   Alpha          Y = [y(l), y(l+1)],        starts 1, 3, 5, ...
///   Beta1/2/3      ȳ = [y(l); y(l+1)],        starts 0/1/2 mod 4
///   Gamma1/2       ỹ = [Re y(l); Im y(l); Re y(l+1); Im y(l+1)], starts 0/2 mod 4
enum class WindowKind : std::uint8_t { Alpha, Beta1, Beta2, Beta3, Gamma1, Gamma2 };

inline constexpr std::array<WindowKind, 6> kAllWindowKinds{
    WindowKind::Alpha,  WindowKind::Beta1,  WindowKind::Beta2,
    WindowKind::Beta3,  WindowKind::Gamma1, WindowKind::Gamma2,
};

/// Which network estimates a kind's feature.
enum class FeatureFamily : std::uint8_t { Alpha, Beta, Gamma };

inline constexpr std::array<FeatureFamily, 3> kAllFamilies{FeatureFamily::Alpha, FeatureFamily::Beta,
                                                            FeatureFamily::Gamma};

FeatureFamily family_of(WindowKind kind);
std::string_view name(WindowKind kind);
std::string_view name(FeatureFamily family);

/// True for the real-stacked (Gamma) kinds.
bool is_real(WindowKind kind);

/// Covariance dimension J: N_r (Alpha), 2N_r (Beta), 4N_r (Gamma).
int covariance_dim(WindowKind kind, int n_r);

/// Ground-truth feature value of `kind` in a signature.
int feature_value(const FeatureSignature& sig, WindowKind kind);

/// Length rounded down to a multiple of 4.
std::size_t usable_length(std::size_t length);

/// Window starts over an axis of `length` samples (truncated to a multiple of 4):
/// Alpha m = 1..L/2-1 -> 2m-1; Beta/Gamma m = 1..L/4 -> 4(m-1) + offset.
std::vector<std::size_t> window_starts(WindowKind kind, std::size_t length);

/// Hermitian (Alpha/Beta) or real symmetric (Gamma) covariance of one kind.
struct Covariance {
    WindowKind kind = WindowKind::Alpha;
    std::variant<ComplexMatrix, RealMatrix> value;

    Eigen::Index dim() const;
    /// Eigenvalues in descending order.
    std::vector<double> eigenvalues() const;
    /// Count of eigenvalues above rel_tol times the largest.
    int rank(double rel_tol = 1e-9) const;
};

/// Exact second moments of one codeword for unit-power 4-PSK symbols.
///   complex: E[v v^H], v = slot-major stacking of C's columns (n_t*T)
///   real:    E[u u^T], u = per-slot [Re s(t); Im s(t)] stacking (2*n_t*T)
struct BlockMoments {
    int n_t = 0;
    int block_len = 0;
    ComplexMatrix complex;
    RealMatrix real;
};

const BlockMoments& block_moments(SchemeId id);

/// Exact covariance of the transmitted window (S S^H, s̄ s̄^H or s̃ s̃^T) averaged
/// over every window position of `kind` within one code period, symbols of
/// variance sigma_s^2. Dimension n_t, 2n_t or 4n_t.
Covariance exact_transmit_covariance(SchemeId id, WindowKind kind, double sigma_s);

/// Exact received-window covariance: H̄ Σ_s H̄^H + c σ_w² I with c = 2, 1, 1/2
/// for Alpha, Beta, Gamma respectively. H is N_r x n_t.
Covariance exact_received_covariance(SchemeId id, WindowKind kind, const ComplexMatrix& channel,
                                     double sigma_w2, double sigma_s = 1.0);

/// Noise floor multiplier c of exact_received_covariance.
double noise_floor_factor(WindowKind kind);

}  // namespace mimoid
