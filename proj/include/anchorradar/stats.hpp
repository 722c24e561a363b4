#ifndef ANCHORRADAR_STATS_HPP
#define ANCHORRADAR_STATS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anchorradar/hypergraph.hpp"
#include "anchorradar/splits.hpp"

namespace anchorradar {

// Per-node anchor degree, anchor proportion, and anchor purity, with all
// degrees restricted to the evaluated edge subset. Purity is defined only
// for nodes whose restricted degree is at least 2.
struct AnchorStats {
    std::vector<std::uint32_t> anchor_degree;    // delta_v
    std::vector<std::uint32_t> subset_degree;    // d_v within the subset
    std::vector<double> proportion;              // p_v = delta_v / d_v, 0 when d_v = 0
    std::vector<std::optional<double>> purity;   // rho_v, empty when d_v < 2

    double purity_mean() const;
    double purity_std() const;   // over nodes, population
    std::size_t purity_count() const;
};

AnchorStats anchor_stats(const Hypergraph& h, const std::vector<EdgeId>& edges);

struct PuritySignificance {
    double real_mean = 0.0;
    double real_std = 0.0;
    double random_mean = 0.0;
    double random_std = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;   // one-sided, alternative real > random
};

// Welch two-sample t-test of mean purity against a randomized copy where
// each edge's anchor is reassigned uniformly among its members (seeded).
PuritySignificance purity_significance(const Hypergraph& h, const std::vector<EdgeId>& edges,
                                       std::uint64_t seed);

// Diagnostic: predict the member with the highest ground-truth anchor
// proportion (computed on the same subset); ties go to the lower node index.
double proportion_oracle_accuracy(const Hypergraph& h, const std::vector<EdgeId>& edges);

struct DegreeHeuristicResult {
    bool use_max = true;        // chosen direction
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
};

// Evaluate the predict-max-degree and predict-min-degree rules on the train
// edges (ties by lower node index), keep the better (ties -> max), report
// test accuracy.
DegreeHeuristicResult degree_heuristic(const Hypergraph& h, const SplitAssignment& splits);

// Analytic expected accuracy of a uniform random guess: mean of |A(e)|/|e|.
double random_baseline(const Hypergraph& h, const std::vector<EdgeId>& edges);

}  // namespace anchorradar

#endif
