#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mimoid/schemes.hpp"

namespace mimoid {

/// Six feature estimates (α, β1, β2, β3, γ1, γ2).
struct FeatureVector {
    double alpha = 0.0;
    std::array<double, 3> beta{};
    std::array<double, 2> gamma{};

    static FeatureVector from(const FeatureSignature& sig);
    std::array<double, 6> as_array() const;
};

/// Norm-1 weights (α, β, γ). The α weight is the lcm of the single-antenna
/// family sums (1, 6, 8) and the others are that lcm divided by each sum.
struct DecisionWeights {
    double alpha = 24.0;
    double beta = 4.0;
    double gamma = 3.0;
};

inline constexpr int kSingleAntennaSums[3] = {1, 6, 8};
inline constexpr int kWeightLcm = 24;
static_assert(kWeightLcm % kSingleAntennaSums[0] == 0 && kWeightLcm % kSingleAntennaSums[1] == 0 &&
                  kWeightLcm % kSingleAntennaSums[2] == 0 && kWeightLcm / kSingleAntennaSums[0] == 24 &&
                  kWeightLcm / kSingleAntennaSums[1] == 4 && kWeightLcm / kSingleAntennaSums[2] == 3,
              "decision weights must be lcm(1,6,8) / (1,6,8)");

double weighted_distance(const FeatureVector& f, const FeatureSignature& sig, const DecisionWeights& w = {});

struct Decision {
    SchemeId scheme = SchemeId::SingleAntenna;
    int n_t = 0;
    double distance = 0.0;
    std::vector<std::pair<SchemeId, double>> ranking;  ///< ascending distance, registry order on ties
    int ties = 0;  ///< other schemes sharing the winning distance
};

/// Minimum weighted distance decision over the full scheme pool.
/// Throws ArgumentError on non-finite features.
Decision decide(const FeatureVector& features, const DecisionWeights& w = {});

struct SchemePair {
    SchemeId a;
    SchemeId b;
    double distance;
};

/// Smallest weighted distance between two distinct signature rows.
SchemePair min_pairwise_distance(const DecisionWeights& w = {});

struct Score {
    double pr1 = 0.0;  ///< macro average over N_t classes
    double pr2 = 0.0;  ///< macro average over schemes
    std::array<std::array<std::size_t, kSchemeCount>, kSchemeCount> confusion{};  ///< [truth][decided]
    std::array<std::size_t, 4> nt_trials{};
    std::array<std::size_t, 4> nt_correct{};
    std::array<std::size_t, kSchemeCount> scheme_trials{};
    std::vector<std::string> warnings;  ///< classes excluded for lack of trials

    double scheme_accuracy(SchemeId id) const;
};

struct TrialOutcome {
    SchemeId truth;
    SchemeId decided;
    int decided_n_t;
};

Score score(std::span<const TrialOutcome> trials);

}  // namespace mimoid
