#ifndef ANCHORRADAR_METRICS_HPP
#define ANCHORRADAR_METRICS_HPP

#include <cstdint>
#include <vector>

#include "anchorradar/hypergraph.hpp"

namespace anchorradar {

struct MetricsReport {
    double accuracy = 0.0;
    double ndcg = 0.0;
    double mrr = 0.0;
    std::size_t edge_count = 0;
    std::uint64_t seed = 0;
};

// Single-anchor: exact-match indicator per edge. Multi-anchor: the predicted
// set must equal the truth set.
double accuracy(const std::vector<std::vector<NodeId>>& predictions,
                const std::vector<std::vector<NodeId>>& truth);

// rankings: 1-based total order of each edge's members (position 0 = rank 1).
// Per edge 1/log2(rank_of_anchor + 1), averaged over anchors of the edge,
// then averaged over edges.
double ndcg(const std::vector<std::vector<NodeId>>& rankings,
            const std::vector<std::vector<NodeId>>& truth);

// as ndcg with per-edge 1/rank
double mrr(const std::vector<std::vector<NodeId>>& rankings,
           const std::vector<std::vector<NodeId>>& truth);

}  // namespace anchorradar

#endif
