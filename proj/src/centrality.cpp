#include "anchorradar/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace anchorradar {

double WeightedGraph::weight_between(NodeId u, NodeId v) const {
    for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i)
        if (neighbors[i] == v) return weights[i];
    return 0.0;
}

WeightedGraph clique_expansion(const Hypergraph& h) {
    const std::size_t n = h.node_count();
    // co-membership counts keyed on (min,max) packed into 64 bits
    std::unordered_map<std::uint64_t, double> pair_weight;
    for (const auto& e : h.edges) {
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j) {
                const std::uint64_t key = (static_cast<std::uint64_t>(e[i]) << 32) | e[j];
                pair_weight[key] += 1.0;
            }
    }

    std::vector<std::size_t> deg(n, 0);
    for (const auto& [key, w] : pair_weight) {
        ++deg[key >> 32];
        ++deg[key & 0xffffffffu];
    }

    WeightedGraph g;
    g.offsets.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.offsets[v + 1] = g.offsets[v] + deg[v];
    g.neighbors.resize(g.offsets[n]);
    g.weights.resize(g.offsets[n]);

    std::vector<std::size_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (const auto& [key, w] : pair_weight) {
        const NodeId u = static_cast<NodeId>(key >> 32);
        const NodeId v = static_cast<NodeId>(key & 0xffffffffu);
        g.neighbors[cursor[u]] = v;
        g.weights[cursor[u]++] = w;
        g.neighbors[cursor[v]] = u;
        g.weights[cursor[v]++] = w;
    }
    // sort adjacency for deterministic iteration order
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t b = g.offsets[v], e = g.offsets[v + 1];
        std::vector<std::pair<NodeId, double>> adj;
        adj.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) adj.emplace_back(g.neighbors[i], g.weights[i]);
        std::sort(adj.begin(), adj.end());
        for (std::size_t i = b; i < e; ++i) {
            g.neighbors[i] = adj[i - b].first;
            g.weights[i] = adj[i - b].second;
        }
    }
    return g;
}

std::vector<double> eigenvector_centrality(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> x(n, 0.0), y(n, 0.0);
    if (n == 0) return x;
    if (g.neighbors.empty()) return x;  // no edges: all zero

    const double init = 1.0 / std::sqrt(static_cast<double>(n));
    std::fill(x.begin(), x.end(), init);

    for (int iter = 0; iter < 1000; ++iter) {
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i)
                acc += g.weights[i] * x[g.neighbors[i]];
            y[v] = acc;
        }
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return std::vector<double>(n, 0.0);
        double diff2 = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            y[v] /= norm;
            const double d = y[v] - x[v];
            diff2 += d * d;
        }
        x.swap(y);
        if (std::sqrt(diff2) < 1e-8) break;
    }
    for (double& v : x) v = std::abs(v);  // non-negative orientation
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& v : x) v /= norm;
    return x;
}

std::vector<double> pagerank_centrality(const WeightedGraph& g, double damping) {
    const std::size_t n = g.node_count();
    std::vector<double> x(n, 0.0);
    if (n == 0) return x;

    std::vector<double> out_weight(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) out_weight[v] += g.weights[i];

    const double uniform = 1.0 / static_cast<double>(n);
    std::fill(x.begin(), x.end(), uniform);
    std::vector<double> y(n, 0.0);

    for (int iter = 0; iter < 200; ++iter) {
        double dangling = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (out_weight[v] == 0.0) dangling += x[v];

        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            if (out_weight[v] == 0.0) continue;
            const double share = x[v] / out_weight[v];
            for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i)
                y[g.neighbors[i]] += share * g.weights[i];
        }
        const double base = (1.0 - damping) * uniform + damping * dangling * uniform;
        double diff1 = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double nv = base + damping * y[v];
            diff1 += std::abs(nv - x[v]);
            y[v] = nv;
        }
        x.swap(y);
        if (diff1 < 1e-10) break;
    }
    return x;
}

std::vector<std::uint32_t> hypergraph_coreness(const Hypergraph& h) {
    const std::size_t n = h.node_count();
    std::vector<std::uint32_t> core(n, 0);
    if (n == 0) return core;

    // incident edge lists
    std::vector<std::vector<EdgeId>> incident(n);
    for (EdgeId e = 0; e < h.edges.size(); ++e)
        for (NodeId v : h.edges[e]) incident[v].push_back(e);

    std::vector<std::uint32_t> count(n);
    for (std::size_t v = 0; v < n; ++v) count[v] = static_cast<std::uint32_t>(incident[v].size());
    std::vector<char> node_alive(n, 1), edge_alive(h.edge_count(), 1);

    std::size_t remaining = n;
    std::uint32_t k = 0;
    std::vector<NodeId> stack;
    while (remaining > 0) {
        ++k;
        for (NodeId v = 0; v < n; ++v)
            if (node_alive[v] && count[v] < k) stack.push_back(v);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            if (!node_alive[v]) continue;
            node_alive[v] = 0;
            core[v] = k - 1;
            --remaining;
            for (EdgeId e : incident[v]) {
                if (!edge_alive[e]) continue;
                edge_alive[e] = 0;  // an edge survives only while fully intact
                for (NodeId u : h.edges[e]) {
                    if (u == v || !node_alive[u]) continue;
                    if (--count[u] < k) stack.push_back(u);
                }
            }
        }
    }
    return core;
}

RawNodeFeatures raw_node_features(const Hypergraph& h) {
    RawNodeFeatures f;
    const auto deg = h.degrees();
    f.degree.assign(deg.begin(), deg.end());
    const WeightedGraph g = clique_expansion(h);
    f.eigenvector = eigenvector_centrality(g);
    f.pagerank = pagerank_centrality(g);
    const auto core = hypergraph_coreness(h);
    f.coreness.assign(core.begin(), core.end());
    return f;
}

}  // namespace anchorradar
