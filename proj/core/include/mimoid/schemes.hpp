#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "mimoid/types.hpp"

namespace mimoid {

/// The 17-member MIMO scheme pool. Enumerator order is the registry order,
/// which is also the tie-breaking order of the classifier.
enum class SchemeId : std::uint8_t {
    SingleAntenna,
    AL,
    SM2,
    SM3,
    SM4,
    OSBC3_1,
    OSBC3_2,
    OSBC3_3,
    OSBC3_4,
    SBC3,
    OSBC4_1,
    OSBC4_2,
    OSBC4_3,
    QOSBC4,
    FSTD,
    SBC4_1,
    SBC4_2,
};

inline constexpr std::size_t kSchemeCount = 17;

/// Ground-truth subspace-rank features (α, β1..β3, γ1..γ2) of a scheme.
struct FeatureSignature {
    int alpha = 0;
    std::array<int, 3> beta{};
    std::array<int, 2> gamma{};

    friend bool operator==(const FeatureSignature&, const FeatureSignature&) = default;
};

struct SchemeDescriptor {
    SchemeId id;
    std::string_view name;
    int n_t;                ///< transmit antennas
    int block_len;          ///< T, slots (or subcarriers) per codeword
    int symbols_per_block;  ///< N_s
    int rate_num;           ///< code rate N_s / T, reduced
    int rate_den;
    FeatureSignature signature;
};

const std::array<SchemeDescriptor, kSchemeCount>& scheme_registry();
const SchemeDescriptor& descriptor(SchemeId id);
std::span<const SchemeId> all_schemes();

std::size_t index_of(SchemeId id);
SchemeId scheme_at(std::size_t index);
std::string_view name(SchemeId id);
std::optional<SchemeId> parse_scheme(std::string_view text);

/// Codeword matrix C(x) in antennas x slots orientation (n_t x T).
///
/// `x` must hold exactly N_s symbols. OSBC4_3 takes [x_b0, x_b1, x_{b+1,0}, x_{b+1,1}].
/// Throws ArgumentError on a wrong symbol count.
ComplexMatrix codeword(SchemeId id, std::span<const cplx> x);

/// Table row of ground-truth features.
FeatureSignature signature(SchemeId id);

/// Recomputes the feature signature from first principles: ranks of the exact
/// transmitted-window covariances (symbol variance sigma_s^2) at the window
/// offsets used by the estimators. Rank counts eigenvalues above 1e-9 of the
/// largest one.
FeatureSignature verify_signature(SchemeId id, double sigma_s);

/// E[Tr(C C^H)] / T for unit-power symbols.
double mean_slot_power(SchemeId id);

/// Amplitude factor sqrt(T / E[Tr(C C^H)]) giving unit total transmit power per slot.
double power_scale(SchemeId id);

}  // namespace mimoid
