#include "mimoid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mimoid {

FeatureVector FeatureVector::from(const FeatureSignature& sig) {
    FeatureVector f;
    f.alpha = sig.alpha;
    for (std::size_t i = 0; i < 3; ++i) f.beta[i] = sig.beta[i];
    for (std::size_t i = 0; i < 2; ++i) f.gamma[i] = sig.gamma[i];
    return f;
}

std::array<double, 6> FeatureVector::as_array() const {
    return {alpha, beta[0], beta[1], beta[2], gamma[0], gamma[1]};
}

double weighted_distance(const FeatureVector& f, const FeatureSignature& sig, const DecisionWeights& w) {
    double b = 0.0;
    for (std::size_t i = 0; i < 3; ++i) b += std::abs(f.beta[i] - sig.beta[i]);
    double g = 0.0;
    for (std::size_t i = 0; i < 2; ++i) g += std::abs(f.gamma[i] - sig.gamma[i]);
    return w.alpha * std::abs(f.alpha - sig.alpha) + w.beta * b + w.gamma * g;
}

Decision decide(const FeatureVector& features, const DecisionWeights& w) {
    for (double v : features.as_array())
        if (!std::isfinite(v)) throw ArgumentError("decide: non-finite feature estimate");
    Decision d;
    d.ranking.reserve(kSchemeCount);
    for (auto id : all_schemes()) d.ranking.emplace_back(id, weighted_distance(features, signature(id), w));
    std::stable_sort(d.ranking.begin(), d.ranking.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    d.scheme = d.ranking.front().first;
    d.distance = d.ranking.front().second;
    d.n_t = descriptor(d.scheme).n_t;
    for (std::size_t i = 1; i < d.ranking.size() && d.ranking[i].second == d.distance; ++i) ++d.ties;
    return d;
}

SchemePair min_pairwise_distance(const DecisionWeights& w) {
    SchemePair best{SchemeId::SingleAntenna, SchemeId::SingleAntenna, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < kSchemeCount; ++i) {
        const auto fi = FeatureVector::from(signature(scheme_at(i)));
        for (std::size_t j = i + 1; j < kSchemeCount; ++j) {
            const double d = weighted_distance(fi, signature(scheme_at(j)), w);
            if (d < best.distance) best = {scheme_at(i), scheme_at(j), d};
        }
    }
    return best;
}

double Score::scheme_accuracy(SchemeId id) const {
    const auto i = index_of(id);
    return scheme_trials[i] == 0 ? 0.0
                                 : static_cast<double>(confusion[i][i]) / static_cast<double>(scheme_trials[i]);
}

Score score(std::span<const TrialOutcome> trials) {
    Score s;
    for (const auto& t : trials) {
        const auto ti = index_of(t.truth);
        const auto di = index_of(t.decided);
        ++s.confusion[ti][di];
        ++s.scheme_trials[ti];
        const auto nt = static_cast<std::size_t>(descriptor(t.truth).n_t - 1);
        ++s.nt_trials[nt];
        if (t.decided_n_t == descriptor(t.truth).n_t) ++s.nt_correct[nt];
    }
    int classes = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        if (s.nt_trials[k] == 0) {
            s.warnings.push_back("no trials with N_t=" + std::to_string(k + 1) + "; excluded from Pr1");
            continue;
        }
        sum += static_cast<double>(s.nt_correct[k]) / static_cast<double>(s.nt_trials[k]);
        ++classes;
    }
    s.pr1 = classes ? sum / classes : 0.0;

    classes = 0;
    sum = 0.0;
    for (std::size_t i = 0; i < kSchemeCount; ++i) {
        if (s.scheme_trials[i] == 0) {
            s.warnings.push_back("no trials for " + std::string(name(scheme_at(i))) + "; excluded from Pr2");
            continue;
        }
        sum += s.scheme_accuracy(scheme_at(i));
        ++classes;
    }
    s.pr2 = classes ? sum / classes : 0.0;
    return s;
}

}  // namespace mimoid
