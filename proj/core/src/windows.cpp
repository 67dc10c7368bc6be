#include "mimoid/windows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mimoid {
namespace {

BlockMoments compute_moments(SchemeId id) {
    const auto& d = descriptor(id);
    const double h = 1.0 / std::numbers::sqrt2;
    const std::array<cplx, 4> qpsk{cplx(h, h), cplx(h, -h), cplx(-h, h), cplx(-h, -h)};

    std::size_t count = 1;
    for (int i = 0; i < d.symbols_per_block; ++i) count *= qpsk.size();

    const Eigen::Index cdim = static_cast<Eigen::Index>(d.n_t) * d.block_len;
    ComplexMatrix v(cdim, static_cast<Eigen::Index>(count));
    RealMatrix u(2 * cdim, static_cast<Eigen::Index>(count));
    std::vector<cplx> x(static_cast<std::size_t>(d.symbols_per_block));
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t code = k;
        for (auto& xi : x) {
            xi = qpsk[code % 4];
            code /= 4;
        }
        const ComplexMatrix c = codeword(id, x);
        for (int t = 0; t < d.block_len; ++t) {
            for (int a = 0; a < d.n_t; ++a) {
                const cplx s = c(a, t);
                v(t * d.n_t + a, static_cast<Eigen::Index>(k)) = s;
                u(2 * t * d.n_t + a, static_cast<Eigen::Index>(k)) = s.real();
                u(2 * t * d.n_t + d.n_t + a, static_cast<Eigen::Index>(k)) = s.imag();
            }
        }
    }
    BlockMoments m;
    m.n_t = d.n_t;
    m.block_len = d.block_len;
    m.complex = v * v.adjoint() / static_cast<double>(count);
    m.real = u * u.transpose() / static_cast<double>(count);
    return m;
}

// Second moment of the window covering slots t, t+1 of a periodic code stream.
// Slots in different codewords are independent and zero-mean, so the cross block vanishes.
template <typename Matrix>
Matrix window_moment(const Matrix& block, int per_slot, int block_len, std::size_t start) {
    const auto t0 = static_cast<int>(start % static_cast<std::size_t>(block_len));
    const auto b0 = start / static_cast<std::size_t>(block_len);
    const auto b1 = (start + 1) / static_cast<std::size_t>(block_len);
    if (b0 == b1) return block.block(t0 * per_slot, t0 * per_slot, 2 * per_slot, 2 * per_slot);
    Matrix out = Matrix::Zero(2 * per_slot, 2 * per_slot);
    out.topLeftCorner(per_slot, per_slot) = block.block(t0 * per_slot, t0 * per_slot, per_slot, per_slot);
    out.bottomRightCorner(per_slot, per_slot) = block.topLeftCorner(per_slot, per_slot);
    return out;
}

}  // namespace

FeatureFamily family_of(WindowKind kind) {
    switch (kind) {
        case WindowKind::Alpha: return FeatureFamily::Alpha;
        case WindowKind::Beta1:
        case WindowKind::Beta2:
        case WindowKind::Beta3: return FeatureFamily::Beta;
        case WindowKind::Gamma1:
        case WindowKind::Gamma2: return FeatureFamily::Gamma;
    }
    throw ArgumentError("unknown window kind");
}

std::string_view name(WindowKind kind) {
    switch (kind) {
        case WindowKind::Alpha: return "alpha";
        case WindowKind::Beta1: return "beta1";
        case WindowKind::Beta2: return "beta2";
        case WindowKind::Beta3: return "beta3";
        case WindowKind::Gamma1: return "gamma1";
        case WindowKind::Gamma2: return "gamma2";
    }
    return "?";
}

std::string_view name(FeatureFamily family) {
    switch (family) {
        case FeatureFamily::Alpha: return "alpha";
        case FeatureFamily::Beta: return "beta";
        case FeatureFamily::Gamma: return "gamma";
    }
    return "?";
}

bool is_real(WindowKind kind) { return family_of(kind) == FeatureFamily::Gamma; }

int covariance_dim(WindowKind kind, int n_r) {
    switch (family_of(kind)) {
        case FeatureFamily::Alpha: return n_r;
        case FeatureFamily::Beta: return 2 * n_r;
        case FeatureFamily::Gamma: return 4 * n_r;
    }
    return 0;
}

int feature_value(const FeatureSignature& sig, WindowKind kind) {
    switch (kind) {
        case WindowKind::Alpha: return sig.alpha;
        case WindowKind::Beta1: return sig.beta[0];
        case WindowKind::Beta2: return sig.beta[1];
        case WindowKind::Beta3: return sig.beta[2];
        case WindowKind::Gamma1: return sig.gamma[0];
        case WindowKind::Gamma2: return sig.gamma[1];
    }
    return 0;
}

std::size_t usable_length(std::size_t length) { return length - length % 4; }

std::vector<std::size_t> window_starts(WindowKind kind, std::size_t length) {
    const std::size_t len = usable_length(length);
    std::vector<std::size_t> starts;
    if (kind == WindowKind::Alpha) {
        if (len < 4) return starts;
        for (std::size_t m = 1; m < len / 2; ++m) starts.push_back(2 * m - 1);
        return starts;
    }
    std::size_t offset = 0;
    switch (kind) {
        case WindowKind::Beta1:
        case WindowKind::Gamma1: offset = 0; break;
        case WindowKind::Beta2: offset = 1; break;
        case WindowKind::Beta3:
        case WindowKind::Gamma2: offset = 2; break;
        case WindowKind::Alpha: break;
    }
    for (std::size_t m = 1; m <= len / 4; ++m) starts.push_back(4 * (m - 1) + offset);
    return starts;
}

Eigen::Index Covariance::dim() const {
    return std::visit([](const auto& m) { return m.rows(); }, value);
}

std::vector<double> Covariance::eigenvalues() const {
    std::vector<double> ev = std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            Eigen::SelfAdjointEigenSolver<M> solver(m, Eigen::EigenvaluesOnly);
            const auto& e = solver.eigenvalues();
            return std::vector<double>(e.data(), e.data() + e.size());
        },
        value);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

int Covariance::rank(double rel_tol) const {
    const auto ev = eigenvalues();
    if (ev.empty() || ev.front() <= 0.0) return 0;
    const double tol = rel_tol * ev.front();
    return static_cast<int>(std::count_if(ev.begin(), ev.end(), [tol](double e) { return e > tol; }));
}

const BlockMoments& block_moments(SchemeId id) {
    static const std::array<BlockMoments, kSchemeCount> table = [] {
        std::array<BlockMoments, kSchemeCount> t;
        for (std::size_t i = 0; i < kSchemeCount; ++i) t[i] = compute_moments(scheme_at(i));
        return t;
    }();
    return table[index_of(id)];
}

Covariance exact_transmit_covariance(SchemeId id, WindowKind kind, double sigma_s) {
    const auto& m = block_moments(id);
    const int n_t = m.n_t;
    const std::size_t period = std::lcm(static_cast<std::size_t>(m.block_len), std::size_t{4});
    // Starts over one period; window_starts on 2*period + 4 covers every phase once.
    std::vector<std::size_t> starts;
    for (auto s : window_starts(kind, 2 * period + 4))
        if (s < period) starts.push_back(s);
    const double var = sigma_s * sigma_s;
    const double norm = var / static_cast<double>(starts.size());

    Covariance cov{kind, {}};
    switch (family_of(kind)) {
        case FeatureFamily::Alpha: {
            ComplexMatrix acc = ComplexMatrix::Zero(n_t, n_t);
            for (auto s : starts) {
                const ComplexMatrix w = window_moment(m.complex, n_t, m.block_len, s);
                acc += w.topLeftCorner(n_t, n_t) + w.bottomRightCorner(n_t, n_t);
            }
            cov.value = ComplexMatrix(acc * norm);
            break;
        }
        case FeatureFamily::Beta: {
            ComplexMatrix acc = ComplexMatrix::Zero(2 * n_t, 2 * n_t);
            for (auto s : starts) acc += window_moment(m.complex, n_t, m.block_len, s);
            cov.value = ComplexMatrix(acc * norm);
            break;
        }
        case FeatureFamily::Gamma: {
            RealMatrix acc = RealMatrix::Zero(4 * n_t, 4 * n_t);
            for (auto s : starts) acc += window_moment(m.real, 2 * n_t, m.block_len, s);
            cov.value = RealMatrix(acc * norm);
            break;
        }
    }
    return cov;
}

double noise_floor_factor(WindowKind kind) {
    switch (family_of(kind)) {
        case FeatureFamily::Alpha: return 2.0;
        case FeatureFamily::Beta: return 1.0;
        case FeatureFamily::Gamma: return 0.5;
    }
    return 0.0;
}

Covariance exact_received_covariance(SchemeId id, WindowKind kind, const ComplexMatrix& channel,
                                     double sigma_w2, double sigma_s) {
    const int n_t = descriptor(id).n_t;
    if (channel.cols() != n_t) throw ArgumentError("exact_received_covariance: channel must be N_r x n_t");
    const Eigen::Index n_r = channel.rows();
    const Covariance tx = exact_transmit_covariance(id, kind, sigma_s);
    const double floor = noise_floor_factor(kind) * sigma_w2;

    Covariance cov{kind, {}};
    switch (family_of(kind)) {
        case FeatureFamily::Alpha: {
            const auto& st = std::get<ComplexMatrix>(tx.value);
            ComplexMatrix c = channel * st * channel.adjoint();
            c.diagonal().array() += floor;
            cov.value = std::move(c);
            break;
        }
        case FeatureFamily::Beta: {
            ComplexMatrix hb = ComplexMatrix::Zero(2 * n_r, 2 * n_t);
            hb.topLeftCorner(n_r, n_t) = channel;
            hb.bottomRightCorner(n_r, n_t) = channel;
            const auto& st = std::get<ComplexMatrix>(tx.value);
            ComplexMatrix c = hb * st * hb.adjoint();
            c.diagonal().array() += floor;
            cov.value = std::move(c);
            break;
        }
        case FeatureFamily::Gamma: {
            // Real-composite channel [Re H, -Im H; Im H, Re H], once per slot.
            RealMatrix ht(2 * n_r, 2 * n_t);
            ht << channel.real(), -channel.imag(), channel.imag(), channel.real();
            RealMatrix hk = RealMatrix::Zero(4 * n_r, 4 * n_t);
            hk.topLeftCorner(2 * n_r, 2 * n_t) = ht;
            hk.bottomRightCorner(2 * n_r, 2 * n_t) = ht;
            const auto& st = std::get<RealMatrix>(tx.value);
            RealMatrix c = hk * st * hk.transpose();
            c.diagonal().array() += floor;
            cov.value = std::move(c);
            break;
        }
    }
    return cov;
}

}  // namespace mimoid
