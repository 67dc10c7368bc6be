#include "mimoid/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace mimoid {
namespace {

constexpr double kHermitianTol = 1e-8;
constexpr double kDegenerate = 1e-300;

void append_windows(ComplexMatrix& w, Eigen::Index& col, const ComplexMatrix& y, WindowKind kind) {
    const Eigen::Index n_r = y.rows();
    for (auto l : window_starts(kind, static_cast<std::size_t>(y.cols()))) {
        const auto li = static_cast<Eigen::Index>(l);
        if (kind == WindowKind::Alpha) {
            w.middleCols(col, 2) = y.middleCols(li, 2);
            col += 2;
        } else {
            w.block(0, col, n_r, 1) = y.col(li);
            w.block(n_r, col, n_r, 1) = y.col(li + 1);
            ++col;
        }
    }
}

template <typename Matrix>
RadiiVector radii_impl(const Matrix& cov, WindowKind kind) {
    const Eigen::Index j = cov.rows();
    if (cov.cols() != j || j < 2) throw ArgumentError("gerschgorin_radii: need a square matrix of size >= 2");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if (!cov.allFinite()) throw ArgumentError("gerschgorin_radii: non-finite entries");
    if ((cov - cov.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale)
        throw ArgumentError("gerschgorin_radii: matrix is not Hermitian");

    const Matrix s1 = cov.topLeftCorner(j - 1, j - 1);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s1);
    if (solver.info() != Eigen::Success) throw DegenerateInputError("gerschgorin_radii: eigensolver failed");
    const auto& ev = solver.eigenvalues();  // ascending
    const auto& q = solver.eigenvectors();
    const auto a = cov.col(j - 1).head(j - 1);

    RadiiVector out;
    out.kind = kind;
    const auto n = static_cast<std::size_t>(j - 1);
    out.mu.resize(n);
    out.r.resize(n);
    out.R.resize(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Index src = j - 2 - static_cast<Eigen::Index>(i);
        out.mu[i] = ev(src);
        out.r[i] = std::abs(q.col(src).dot(a));  // dot() conjugates the first argument
        sum += out.mu[i];
    }
    out.mu_J = sum / static_cast<double>(n);
    if (!(out.mu_J > kDegenerate)) throw DegenerateInputError("gerschgorin_radii: mean eigenvalue is zero");
    for (std::size_t i = 0; i < n; ++i) out.R[i] = out.mu[i] / out.mu_J * out.r[i];
    return out;
}

}  // namespace

ComplexMatrix window_matrix(const ComplexMatrix& y, WindowKind kind) {
    if (is_real(kind)) throw ArgumentError("window_matrix: Gamma kinds are real, use real_window_matrix");
    const auto starts = window_starts(kind, static_cast<std::size_t>(y.cols()));
    const Eigen::Index n_r = y.rows();
    const auto count = static_cast<Eigen::Index>(starts.size());
    ComplexMatrix w = kind == WindowKind::Alpha ? ComplexMatrix(n_r, 2 * count) : ComplexMatrix(2 * n_r, count);
    Eigen::Index col = 0;
    append_windows(w, col, y, kind);
    return w;
}

RealMatrix real_window_matrix(const ComplexMatrix& y, WindowKind kind) {
    if (!is_real(kind)) throw ArgumentError("real_window_matrix: only Gamma kinds are real");
    const auto starts = window_starts(kind, static_cast<std::size_t>(y.cols()));
    const Eigen::Index n_r = y.rows();
    RealMatrix w(4 * n_r, static_cast<Eigen::Index>(starts.size()));
    Eigen::Index col = 0;
    for (auto l : starts) {
        const auto li = static_cast<Eigen::Index>(l);
        w.block(0, col, n_r, 1) = y.col(li).real();
        w.block(n_r, col, n_r, 1) = y.col(li).imag();
        w.block(2 * n_r, col, n_r, 1) = y.col(li + 1).real();
        w.block(3 * n_r, col, n_r, 1) = y.col(li + 1).imag();
        ++col;
    }
    return w;
}

Covariance estimate_covariance(const ComplexMatrix& y, WindowKind kind) {
    if (y.cols() < 8) throw ArgumentError("estimate_covariance: need at least 8 slots, got " + std::to_string(y.cols()));
    if (y.rows() < 1) throw ArgumentError("estimate_covariance: no receive antennas");
    const double count = static_cast<double>(window_starts(kind, static_cast<std::size_t>(y.cols())).size());
    Covariance cov{kind, {}};
    if (is_real(kind)) {
        const RealMatrix w = real_window_matrix(y, kind);
        RealMatrix c = RealMatrix::Zero(w.rows(), w.rows());
        c.selfadjointView<Eigen::Lower>().rankUpdate(w, 1.0 / count);
        cov.value = RealMatrix(c.selfadjointView<Eigen::Lower>());
    } else {
        const ComplexMatrix w = window_matrix(y, kind);
        ComplexMatrix c = ComplexMatrix::Zero(w.rows(), w.rows());
        c.selfadjointView<Eigen::Lower>().rankUpdate(w, 1.0 / count);
        cov.value = ComplexMatrix(c.selfadjointView<Eigen::Lower>());
    }
    return cov;
}

RadiiVector gerschgorin_radii(const Covariance& cov) {
    return std::visit([&](const auto& m) { return radii_impl(m, cov.kind); }, cov.value);
}

RadiiVector gerschgorin_radii(const ComplexMatrix& cov, WindowKind kind) { return radii_impl(cov, kind); }

RadiiVector gerschgorin_radii(const RealMatrix& cov, WindowKind kind) { return radii_impl(cov, kind); }

RadiiVector combine_detectors(std::span<const RadiiVector> detectors) {
    if (detectors.empty()) throw ArgumentError("combine_detectors: need at least one detector");
    const auto& first = detectors.front();
    RadiiVector out;
    out.kind = first.kind;
    out.R.assign(first.R.size(), 0.0);
    out.mu.assign(first.mu.size(), 0.0);
    out.r.assign(first.r.size(), 0.0);
    for (const auto& d : detectors) {
        if (d.kind != first.kind) throw ArgumentError("combine_detectors: mixed window kinds");
        if (d.R.size() != first.R.size() || d.mu.size() != first.mu.size() || d.r.size() != first.r.size())
            throw ArgumentError("combine_detectors: radii lengths differ");
        for (std::size_t i = 0; i < out.R.size(); ++i) out.R[i] += d.R[i];
        for (std::size_t i = 0; i < out.mu.size(); ++i) out.mu[i] += d.mu[i];
        for (std::size_t i = 0; i < out.r.size(); ++i) out.r[i] += d.r[i];
        out.mu_J += d.mu_J;
    }
    const double n = static_cast<double>(detectors.size());
    for (auto& v : out.R) v /= n;
    for (auto& v : out.mu) v /= n;
    for (auto& v : out.r) v /= n;
    out.mu_J /= n;
    return out;
}

ComplexMatrix restructure_sfbc(const OfdmObservation& obs, WindowKind kind, std::size_t l) {
    const int n = obs.n_subcarriers();
    const int nb = obs.n_symbols();
    if (nb == 0) throw ArgumentError("restructure_sfbc: N_b = 0");
    if (n < 8) throw ArgumentError("restructure_sfbc: need N >= 8 subcarriers");
    if (l + 1 >= static_cast<std::size_t>(n)) throw ArgumentError("restructure_sfbc: window start out of range");
    const auto& a = obs.subcarriers[l];
    const auto& b = obs.subcarriers[l + 1];
    const Eigen::Index n_r = obs.n_r();
    if (kind == WindowKind::Alpha) {
        ComplexMatrix w(n_r, 2 * nb);
        for (int s = 0; s < nb; ++s) {
            w.col(2 * s) = a.col(s);
            w.col(2 * s + 1) = b.col(s);
        }
        return w;
    }
    ComplexMatrix w(2 * n_r, nb);
    w.topRows(n_r) = a;
    w.bottomRows(n_r) = b;
    return w;
}

Covariance sfbc_covariance(const OfdmObservation& obs, WindowKind kind, std::size_t l) {
    const ComplexMatrix w = restructure_sfbc(obs, kind, l);
    const double nb = obs.n_symbols();
    Covariance cov{kind, {}};
    if (is_real(kind)) {
        const Eigen::Index n_r = obs.n_r();
        RealMatrix u(4 * n_r, w.cols());
        u << w.topRows(n_r).real(), w.topRows(n_r).imag(), w.bottomRows(n_r).real(), w.bottomRows(n_r).imag();
        RealMatrix c = RealMatrix::Zero(u.rows(), u.rows());
        c.selfadjointView<Eigen::Lower>().rankUpdate(u, 1.0 / nb);
        cov.value = RealMatrix(c.selfadjointView<Eigen::Lower>());
    } else {
        ComplexMatrix c = ComplexMatrix::Zero(w.rows(), w.rows());
        c.selfadjointView<Eigen::Lower>().rankUpdate(w, 1.0 / nb);
        cov.value = ComplexMatrix(c.selfadjointView<Eigen::Lower>());
    }
    return cov;
}

std::vector<ComplexMatrix> group_stbc_ofdm(const OfdmObservation& obs) {
    const int n = obs.n_subcarriers();
    const int nb = obs.n_symbols();
    if (n % 4 != 0) throw ArgumentError("group_stbc_ofdm: N=" + std::to_string(n) + " is not divisible by 4");
    if (nb == 0) throw ArgumentError("group_stbc_ofdm: N_b = 0");
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(n / 4));
    for (int p = 0; p < n / 4; ++p) {
        ComplexMatrix b(obs.n_r(), 4 * nb);
        for (int i = 0; i < 4; ++i) b.middleCols(i * nb, nb) = obs.subcarriers[static_cast<std::size_t>(4 * p + i)];
        blocks.push_back(std::move(b));
    }
    return blocks;
}

}  // namespace mimoid
