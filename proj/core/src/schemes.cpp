#include "mimoid/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mimoid/windows.hpp"

namespace mimoid {
namespace {

using S = SchemeId;

constexpr std::array<SchemeDescriptor, kSchemeCount> kRegistry{{
    //  id                name             n_t  T  N_s  rate   α   β1 β2 β3   γ1  γ2
    {S::SingleAntenna, "SingleAntenna", 1, 1, 1, 1, 1, {1, {2, 2, 2}, {4, 4}}},
    {S::AL, "AL", 2, 2, 2, 1, 1, {2, {4, 4, 4}, {4, 4}}},
    {S::SM2, "SM2", 2, 1, 2, 2, 1, {2, {4, 4, 4}, {8, 8}}},
    {S::SM3, "SM3", 3, 1, 3, 3, 1, {3, {6, 6, 6}, {12, 12}}},
    {S::SM4, "SM4", 4, 1, 4, 4, 1, {4, {8, 8, 8}, {16, 16}}},
    {S::OSBC3_1, "OSBC3_1", 3, 8, 4, 1, 2, {3, {4, 4, 4}, {8, 8}}},
    {S::OSBC3_2, "OSBC3_2", 3, 4, 3, 3, 4, {3, {3, 5, 5}, {6, 6}}},
    {S::OSBC3_3, "OSBC3_3", 3, 4, 3, 3, 4, {3, {5, 3, 3}, {6, 6}}},
    {S::OSBC3_4, "OSBC3_4", 3, 4, 3, 3, 4, {3, {5, 5, 3}, {6, 6}}},
    {S::SBC3, "SBC3", 3, 2, 4, 2, 1, {3, {6, 6, 6}, {8, 8}}},
    {S::OSBC4_1, "OSBC4_1", 4, 8, 4, 1, 2, {4, {4, 4, 4}, {8, 8}}},
    {S::OSBC4_2, "OSBC4_2", 4, 4, 3, 3, 4, {4, {5, 5, 5}, {6, 6}}},
    {S::OSBC4_3, "OSBC4_3", 4, 4, 4, 1, 1, {4, {8, 6, 8}, {8, 8}}},
    {S::QOSBC4, "QOSBC4", 4, 4, 4, 1, 1, {4, {8, 4, 8}, {8, 8}}},
    {S::FSTD, "FSTD", 4, 4, 4, 1, 1, {4, {4, 4, 4}, {4, 4}}},
    {S::SBC4_1, "SBC4_1", 4, 2, 4, 2, 1, {4, {8, 8, 8}, {8, 8}}},
    {S::SBC4_2, "SBC4_2", 4, 2, 6, 3, 1, {4, {8, 8, 8}, {12, 12}}},
}};

constexpr std::array<SchemeId, kSchemeCount> kAll = [] {
    std::array<SchemeId, kSchemeCount> ids{};
    for (std::size_t i = 0; i < kSchemeCount; ++i) ids[i] = kRegistry[i].id;
    return ids;
}();

static_assert([] {
    for (std::size_t i = 0; i < kSchemeCount; ++i)
        if (static_cast<std::size_t>(kRegistry[i].id) != i) return false;
    return true;
}(), "registry order must follow SchemeId");

cplx cj(cplx v) { return std::conj(v); }

ComplexMatrix alamouti(cplx x0, cplx x1) {
    ComplexMatrix c(2, 2);
    c << x0, -cj(x1),
         x1, cj(x0);
    return c;
}

// 8-slot orthogonal designs: first four rows real-coefficient, last four their conjugates.
// Rows are slots here; the caller transposes into antennas x slots.
ComplexMatrix rate_half_design(std::span<const cplx> x, int n_t) {
    ComplexMatrix slots(8, 4);
    slots.row(0) << x[0], x[1], x[2], x[3];
    slots.row(1) << -x[1], x[0], -x[3], x[2];
    slots.row(2) << -x[2], x[3], x[0], -x[1];
    slots.row(3) << -x[3], -x[2], x[1], x[0];
    slots.bottomRows(4) = slots.topRows(4).conjugate();
    return slots.leftCols(n_t).transpose();
}

}  // namespace

const std::array<SchemeDescriptor, kSchemeCount>& scheme_registry() { return kRegistry; }

const SchemeDescriptor& descriptor(SchemeId id) { return kRegistry.at(index_of(id)); }

std::span<const SchemeId> all_schemes() { return kAll; }

std::size_t index_of(SchemeId id) { return static_cast<std::size_t>(id); }

SchemeId scheme_at(std::size_t index) {
    if (index >= kSchemeCount) throw ArgumentError("scheme index out of range");
    return kAll[index];
}

std::string_view name(SchemeId id) { return descriptor(id).name; }

std::optional<SchemeId> parse_scheme(std::string_view text) {
    for (const auto& d : kRegistry)
        if (d.name == text) return d.id;
    if (text == "QOSBC") return SchemeId::QOSBC4;
    if (text == "SA" || text == "single") return SchemeId::SingleAntenna;
    return std::nullopt;
}

ComplexMatrix codeword(SchemeId id, std::span<const cplx> x) {
    const auto& d = descriptor(id);
    if (static_cast<int>(x.size()) != d.symbols_per_block)
        throw ArgumentError(std::string("codeword(") + std::string(d.name) + "): expected " +
                            std::to_string(d.symbols_per_block) + " symbols, got " +
                            std::to_string(x.size()));
    const double r2 = std::numbers::sqrt2;
    ComplexMatrix c;
    switch (id) {
        case S::SingleAntenna:
        case S::SM2:
        case S::SM3:
        case S::SM4:
            c = Eigen::Map<const ComplexVector>(x.data(), d.n_t);
            break;
        case S::AL:
            c = alamouti(x[0], x[1]);
            break;
        case S::OSBC3_1:
            c = rate_half_design(x, 3);
            break;
        case S::OSBC4_1:
            c = rate_half_design(x, 4);
            break;
        case S::OSBC3_2:
            c.resize(3, 4);
            c << x[0], 0.0, x[1], -x[2],
                 0.0, x[0], cj(x[2]), cj(x[1]),
                 -cj(x[1]), -x[2], cj(x[0]), 0.0;
            break;
        case S::OSBC3_3:
            c.resize(3, 4);
            c << x[0], -cj(x[1]), cj(x[2]), 0.0,
                 x[1], cj(x[0]), 0.0, -cj(x[2]),
                 x[2], 0.0, -cj(x[0]), cj(x[1]);
            break;
        case S::OSBC3_4: {
            ComplexMatrix slots(4, 3);
            slots << x[0], x[1], x[2] / r2,
                     -cj(x[1]), cj(x[0]), x[2] / r2,
                     cj(x[2]) / r2, cj(x[2]) / r2, (-x[0] - cj(x[0]) + x[1] - cj(x[1])) / 2.0,
                     cj(x[2]) / r2, -cj(x[2]) / r2, (x[1] + cj(x[1]) + x[0] - cj(x[0])) / 2.0;
            c = slots.transpose();
            break;
        }
        case S::SBC3: {
            ComplexMatrix slots(2, 3);
            slots << x[0], -cj(x[1]), x[2],
                     x[1], cj(x[0]), x[3];
            c = slots.transpose();
            break;
        }
        case S::OSBC4_2: {
            ComplexMatrix slots(4, 4);
            slots << x[0], x[1], x[2] / r2, x[2] / r2,
                     -cj(x[1]), cj(x[0]), x[2] / r2, -x[2] / r2,
                     cj(x[2]) / r2, cj(x[2]) / r2, (-x[0] - cj(x[0]) + x[1] - cj(x[1])) / 2.0,
                         (x[0] - cj(x[0]) - x[1] - cj(x[1])) / 2.0,
                     cj(x[2]) / r2, -cj(x[2]) / r2, (x[1] + cj(x[1]) + x[0] - cj(x[0])) / 2.0,
                         (-x[0] - cj(x[0]) - x[1] - cj(x[1])) / 2.0;
            c = slots.transpose();
            break;
        }
        case S::OSBC4_3: {
            const ComplexMatrix a = alamouti(x[0], x[1]);
            const ComplexMatrix b = alamouti(x[2], x[3]);
            const double nb = std::norm(x[2]) + std::norm(x[3]);
            if (nb == 0.0) throw ArgumentError("codeword(OSBC4_3): second symbol block has zero norm");
            c.resize(4, 4);
            c.topLeftCorner(2, 2) = a;
            c.topRightCorner(2, 2) = b;
            c.bottomLeftCorner(2, 2) = -b.conjugate();
            c.bottomRightCorner(2, 2) = b.conjugate() * a * b / nb;
            break;
        }
        case S::QOSBC4:
            c.resize(4, 4);
            c << x[0], x[1], x[2], x[3],
                 -cj(x[1]), cj(x[0]), -cj(x[3]), cj(x[2]),
                 -cj(x[2]), -cj(x[3]), cj(x[0]), cj(x[1]),
                 x[3], -x[2], -x[1], x[0];
            break;
        case S::FSTD:
            c.resize(4, 4);
            c << x[0], x[1], 0.0, 0.0,
                 0.0, 0.0, x[2], x[3],
                 -cj(x[1]), cj(x[0]), 0.0, 0.0,
                 0.0, 0.0, -cj(x[3]), cj(x[2]);
            break;
        case S::SBC4_1: {
            ComplexMatrix slots(2, 4);
            slots << x[0], -cj(x[1]), x[2], -cj(x[3]),
                     x[1], cj(x[0]), x[3], cj(x[2]);
            c = slots.transpose();
            break;
        }
        case S::SBC4_2: {
            ComplexMatrix slots(2, 4);
            slots << x[0], -cj(x[1]), x[2], x[4],
                     x[1], cj(x[0]), x[3], x[5];
            c = slots.transpose();
            break;
        }
    }
    return c;
}

FeatureSignature signature(SchemeId id) { return descriptor(id).signature; }

FeatureSignature verify_signature(SchemeId id, double sigma_s) {
    if (!(sigma_s > 0.0)) throw ArgumentError("verify_signature: sigma_s must be positive");
    FeatureSignature sig;
    sig.alpha = exact_transmit_covariance(id, WindowKind::Alpha, sigma_s).rank();
    sig.beta[0] = exact_transmit_covariance(id, WindowKind::Beta1, sigma_s).rank();
    sig.beta[1] = exact_transmit_covariance(id, WindowKind::Beta2, sigma_s).rank();
    sig.beta[2] = exact_transmit_covariance(id, WindowKind::Beta3, sigma_s).rank();
    sig.gamma[0] = exact_transmit_covariance(id, WindowKind::Gamma1, sigma_s).rank();
    sig.gamma[1] = exact_transmit_covariance(id, WindowKind::Gamma2, sigma_s).rank();
    return sig;
}

double mean_slot_power(SchemeId id) {
    const auto& m = block_moments(id);
    return m.complex.trace().real() / m.block_len;
}

double power_scale(SchemeId id) { return 1.0 / std::sqrt(mean_slot_power(id)); }

}  // namespace mimoid
