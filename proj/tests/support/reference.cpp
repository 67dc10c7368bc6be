#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mimoid::reference {

EigenPairs jacobi_eigen(const ComplexMatrix& input, double tol, int max_sweeps) {
    const Eigen::Index n = input.rows();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::Identity(n, n);
    const double scale = std::max(1e-300, a.norm());

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) < tol * scale) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double g = std::abs(a(p, q));
                if (g == 0.0) continue;
                // Phase-align a_pq, then a real rotation zeroes it.
                const cplx ph = a(p, q) / g;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J restricted to (p, q): [[c, s], [-s conj(ph), c conj(ph)]]
                const cplx jpp = c, jpq = s, jqp = -s * std::conj(ph), jqq = c * std::conj(ph);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i).real() > a(j, j).real(); });
    EigenPairs out;
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values.push_back(a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]).real());
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

Radii brute_force_radii(const ComplexMatrix& cov) {
    const Eigen::Index j = cov.rows();
    const ComplexMatrix s1 = cov.topLeftCorner(j - 1, j - 1);
    const EigenPairs e = jacobi_eigen(s1);
    Radii out;
    out.mu = e.values;
    out.mu_J = std::accumulate(out.mu.begin(), out.mu.end(), 0.0) / static_cast<double>(j - 1);
    for (Eigen::Index i = 0; i < j - 1; ++i) {
        cplx rho = 0.0;
        for (Eigen::Index k = 0; k < j - 1; ++k) rho += std::conj(e.vectors(k, i)) * cov(k, j - 1);
        out.r.push_back(std::abs(rho));
        out.R.push_back(out.mu[static_cast<std::size_t>(i)] / out.mu_J * std::abs(rho));
    }
    return out;
}

}  // namespace mimoid::reference
