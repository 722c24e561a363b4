#include "anchorradar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anchorradar {

namespace {

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) throw std::runtime_error("metrics: prediction/truth size mismatch");
    if (a == 0) throw std::runtime_error("metrics: no edges to evaluate");
}

std::size_t rank_of(const std::vector<NodeId>& ranking, NodeId v) {
    for (std::size_t i = 0; i < ranking.size(); ++i)
        if (ranking[i] == v) return i + 1;
    throw std::runtime_error("metrics: anchor absent from ranking");
}

}  // namespace

double accuracy(const std::vector<std::vector<NodeId>>& predictions,
                const std::vector<std::vector<NodeId>>& truth) {
    check_sizes(predictions.size(), truth.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        std::vector<NodeId> p = predictions[i], t = truth[i];
        std::sort(p.begin(), p.end());
        std::sort(t.begin(), t.end());
        correct += (p == t);
    }
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double ndcg(const std::vector<std::vector<NodeId>>& rankings,
            const std::vector<std::vector<NodeId>>& truth) {
    check_sizes(rankings.size(), truth.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        double edge_val = 0.0;
        for (NodeId a : truth[i])
            edge_val += 1.0 / std::log2(static_cast<double>(rank_of(rankings[i], a)) + 1.0);
        total += edge_val / static_cast<double>(truth[i].size());
    }
    return total / static_cast<double>(rankings.size());
}

double mrr(const std::vector<std::vector<NodeId>>& rankings,
           const std::vector<std::vector<NodeId>>& truth) {
    check_sizes(rankings.size(), truth.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        double edge_val = 0.0;
        for (NodeId a : truth[i]) edge_val += 1.0 / static_cast<double>(rank_of(rankings[i], a));
        total += edge_val / static_cast<double>(truth[i].size());
    }
    return total / static_cast<double>(rankings.size());
}

}  // namespace anchorradar
