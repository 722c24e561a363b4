#ifndef ANCHORRADAR_CENTRALITY_HPP
#define ANCHORRADAR_CENTRALITY_HPP

#include <cstdint>
#include <vector>

#include "anchorradar/hypergraph.hpp"

namespace anchorradar {

// Weighted clique expansion: w(u,v) = number of hyperedges (with
// multiplicity) containing both u and v. No self-loops; size-1 edges
// contribute nothing. Stored as CSR over the node set.
struct WeightedGraph {
    std::vector<std::size_t> offsets;     // node_count+1
    std::vector<NodeId> neighbors;
    std::vector<double> weights;

    std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
    double weight_between(NodeId u, NodeId v) const;
};

WeightedGraph clique_expansion(const Hypergraph& h);

// degree / eigenvector / PageRank / coreness per node
struct RawNodeFeatures {
    std::vector<double> degree;
    std::vector<double> eigenvector;  // unit L2 norm, non-negative; 0 on isolated nodes
    std::vector<double> pagerank;     // sums to 1
    std::vector<double> coreness;
};

// Power iteration on the weighted expansion: tolerance 1e-8 on the L2
// difference of successive iterates, at most 1000 iterations, oriented
// non-negative.
std::vector<double> eigenvector_centrality(const WeightedGraph& g);

// PageRank with damping 0.85 on the weighted expansion; dangling mass
// redistributed uniformly; L1 tolerance 1e-10, at most 200 iterations.
std::vector<double> pagerank_centrality(const WeightedGraph& g, double damping = 0.85);

// Hypergraph coreness: peel nodes with incident-edge count < k for
// k = 1, 2, ...; a hyperedge dies as soon as any of its members is peeled
// (the surviving sub-hypergraph keeps only fully intact edges). The
// coreness of v is the largest k at which v is still present.
std::vector<std::uint32_t> hypergraph_coreness(const Hypergraph& h);

RawNodeFeatures raw_node_features(const Hypergraph& h);

}  // namespace anchorradar

#endif
