#include "anchorradar/stage2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anchorradar/rng.hpp"
#include "anchorradar/stage1.hpp"

namespace anchorradar {

namespace {

// softmax of s2 restricted to one edge's members, max-stabilized
void edge_softmax_nodes(const std::vector<double>& s2, const std::vector<NodeId>& edge,
                        std::vector<double>& out) {
    out.resize(edge.size());
    double mx = s2[edge[0]];
    for (std::size_t i = 1; i < edge.size(); ++i) mx = std::max(mx, s2[edge[i]]);
    double denom = 0.0;
    for (std::size_t i = 0; i < edge.size(); ++i) {
        out[i] = std::exp(s2[edge[i]] - mx);
        denom += out[i];
    }
    for (double& v : out) v /= denom;
}

void edge_softmax_rows(const std::vector<double>& scores, std::size_t begin, std::size_t end,
                       std::vector<double>& out) {
    out.resize(end - begin);
    double mx = scores[begin];
    for (std::size_t r = begin + 1; r < end; ++r) mx = std::max(mx, scores[r]);
    double denom = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
        out[r - begin] = std::exp(scores[r] - mx);
        denom += out[r - begin];
    }
    for (double& v : out) v /= denom;
}

std::size_t member_position(const std::vector<NodeId>& edge, NodeId v) {
    const auto it = std::lower_bound(edge.begin(), edge.end(), v);
    return static_cast<std::size_t>(it - edge.begin());
}

}  // namespace

double stage2_loss(const std::vector<double>& s2, const std::vector<double>& s1_scores,
                   const Hypergraph& h, const IncidenceIndex& inc,
                   const std::vector<EdgeId>& train_edges, double alpha) {
    if (alpha < 0.0) throw std::runtime_error("stage2: alpha must be >= 0");
    double loss = 0.0;
    std::vector<double> p2, p1;
    for (EdgeId e : train_edges) {
        const auto& edge = h.edges[e];
        edge_softmax_nodes(s2, edge, p2);
        edge_softmax_rows(s1_scores, inc.edge_row_begin[e], inc.edge_row_begin[e + 1], p1);
        for (NodeId a : h.anchors[e]) {
            const std::size_t i = member_position(edge, a);
            loss += -std::log(p2[i]) - alpha * p2[i] * p1[i];
        }
    }
    return loss;
}

double stage2_loss_gradient(const std::vector<double>& s2, const std::vector<double>& s1_scores,
                            const Hypergraph& h, const IncidenceIndex& inc,
                            const std::vector<EdgeId>& train_edges, double alpha,
                            std::vector<double>& grad_out) {
    if (alpha < 0.0) throw std::runtime_error("stage2: alpha must be >= 0");
    grad_out.assign(s2.size(), 0.0);
    double loss = 0.0;
    std::vector<double> p2, p1;
    for (EdgeId e : train_edges) {
        const auto& edge = h.edges[e];
        edge_softmax_nodes(s2, edge, p2);
        edge_softmax_rows(s1_scores, inc.edge_row_begin[e], inc.edge_row_begin[e + 1], p1);
        for (NodeId a : h.anchors[e]) {
            const std::size_t ia = member_position(edge, a);
            loss += -std::log(p2[ia]) - alpha * p2[ia] * p1[ia];
            // d(-log p2_a)/ds_u = p2_u - [u == a]
            // d(-p2_a p1_a)/ds_u = p1_a p2_a (p2_u - [u == a])
            const double align = alpha * p1[ia] * p2[ia];
            for (std::size_t i = 0; i < edge.size(); ++i) {
                const double ind = (i == ia) ? 1.0 : 0.0;
                grad_out[edge[i]] += (p2[i] - ind) + align * (p2[i] - ind);
            }
        }
    }
    return loss;
}

double stage2_alignment_loss(const std::vector<double>& s2, const std::vector<double>& s1_scores,
                             const Hypergraph& h, const IncidenceIndex& inc,
                             const std::vector<EdgeId>& edges) {
    double loss = 0.0;
    std::vector<double> p2, p1;
    for (EdgeId e : edges) {
        const auto& edge = h.edges[e];
        edge_softmax_nodes(s2, edge, p2);
        edge_softmax_rows(s1_scores, inc.edge_row_begin[e], inc.edge_row_begin[e + 1], p1);
        double dot = 0.0;
        for (std::size_t i = 0; i < edge.size(); ++i) dot += p2[i] * p1[i];
        loss -= dot;
    }
    return loss;
}

double stage2_alignment_gradient(const std::vector<double>& s2,
                                 const std::vector<double>& s1_scores, const Hypergraph& h,
                                 const IncidenceIndex& inc, const std::vector<EdgeId>& edges,
                                 std::vector<double>& grad_accum, double scale) {
    double loss = 0.0;
    std::vector<double> p2, p1;
    for (EdgeId e : edges) {
        const auto& edge = h.edges[e];
        edge_softmax_nodes(s2, edge, p2);
        edge_softmax_rows(s1_scores, inc.edge_row_begin[e], inc.edge_row_begin[e + 1], p1);
        double dot = 0.0;
        for (std::size_t i = 0; i < edge.size(); ++i) dot += p2[i] * p1[i];
        loss -= dot;
        // d(-<p2, p1>)/ds_u = p2_u * (<p2, p1> - p1_u)
        for (std::size_t i = 0; i < edge.size(); ++i)
            grad_accum[edge[i]] += scale * p2[i] * (dot - p1[i]);
    }
    return loss;
}

AnchorStrengthTable train_stage2(const Hypergraph& h, const std::vector<double>& s1_scores,
                                 const IncidenceIndex& inc, const SplitAssignment& splits,
                                 const Stage2Config& cfg) {
    const std::vector<EdgeId> train_edges = splits.edges_in(Split::train);
    if (train_edges.empty()) throw std::runtime_error("stage2: train split is empty");

    std::vector<EdgeId> unlabeled;
    if (cfg.alignment == AlignmentMode::unlabeled_incidences && cfg.alpha > 0.0) {
        for (EdgeId e = 0; e < h.edge_count(); ++e) {
            const Split s = splits.edge_split[e];
            if (s == Split::validation || s == Split::test) unlabeled.push_back(e);
        }
    }

    AnchorStrengthTable table;
    table.s2.assign(h.node_count(), 1.0);

    AdamState adam(table.s2.size(), cfg.learning_rate);
    std::vector<double> grad(table.s2.size(), 0.0);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss;
        if (cfg.alignment == AlignmentMode::train_anchors) {
            loss = stage2_loss_gradient(table.s2, s1_scores, h, inc, train_edges, cfg.alpha, grad);
        } else {
            loss = stage2_loss_gradient(table.s2, s1_scores, h, inc, train_edges, 0.0, grad);
            if (!unlabeled.empty())
                loss += cfg.alpha * stage2_alignment_gradient(table.s2, s1_scores, h, inc,
                                                              unlabeled, grad, cfg.alpha);
        }
        if (!std::isfinite(loss))
            throw std::runtime_error("stage2: non-finite loss at epoch " + std::to_string(epoch));
        adam.update(table.s2, grad);
    }
    return table;
}

AggregatedProportions global_aggregate(const AnchorStrengthTable& s2, const Hypergraph& h,
                                       const SplitAssignment& splits, double w,
                                       std::uint64_t seed) {
    if (w < 0.0) throw std::runtime_error("aggregate: w must be >= 0");
    AggregatedProportions out;
    out.w = w;
    out.edge_argmax.resize(h.edge_count());
    out.p_hat.assign(h.node_count(), 0.0);

    std::vector<NodeId> tied;
    for (EdgeId e = 0; e < h.edges.size(); ++e) {
        const auto& edge = h.edges[e];
        double mx = s2.s2[edge[0]];
        for (NodeId v : edge) mx = std::max(mx, s2.s2[v]);
        tied.clear();
        for (NodeId v : edge)
            if (s2.s2[v] == mx) tied.push_back(v);
        if (tied.size() == 1) {
            out.edge_argmax[e] = tied[0];
        } else {
            Rng rng(mix_seed(seed, 0x61726d78ULL + e));  // per-edge draw order
            out.edge_argmax[e] = tied[rng.next_below(tied.size())];
        }
    }

    const auto deg = h.degrees();
    for (EdgeId e = 0; e < h.edges.size(); ++e) {
        if (splits.edge_split[e] == Split::train) {
            for (NodeId a : h.anchors[e]) out.p_hat[a] += w;
        } else {
            out.p_hat[out.edge_argmax[e]] += 1.0;
        }
    }
    for (std::size_t v = 0; v < out.p_hat.size(); ++v)
        if (deg[v] > 0) out.p_hat[v] /= static_cast<double>(deg[v]);
    return out;
}

std::vector<NodeId> rank_edge_members(const AggregatedProportions& p,
                                      const AnchorStrengthTable& s2,
                                      const std::vector<NodeId>& edge) {
    std::vector<NodeId> order(edge);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (p.p_hat[a] != p.p_hat[b]) return p.p_hat[a] > p.p_hat[b];
        if (s2.s2[a] != s2.s2[b]) return s2.s2[a] > s2.s2[b];
        return a < b;
    });
    return order;
}

std::vector<NodeId> rank_edge_members_by_strength(const AnchorStrengthTable& s2,
                                                  const std::vector<NodeId>& edge) {
    std::vector<NodeId> order(edge);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (s2.s2[a] != s2.s2[b]) return s2.s2[a] > s2.s2[b];
        return a < b;
    });
    return order;
}

std::vector<std::vector<NodeId>> predict(const AggregatedProportions& p,
                                         const AnchorStrengthTable& s2, const Hypergraph& h,
                                         const std::vector<EdgeId>& target_edges, std::size_t k) {
    if (target_edges.empty()) throw std::runtime_error("predict: no target edges");
    std::vector<std::vector<NodeId>> out;
    out.reserve(target_edges.size());
    for (EdgeId e : target_edges) {
        if (k > h.edges[e].size())
            throw std::runtime_error("predict: k exceeds edge size for edge " + std::to_string(e));
        auto order = rank_edge_members(p, s2, h.edges[e]);
        order.resize(k);
        out.push_back(std::move(order));
    }
    return out;
}

std::array<double, 11> edge_strength_features(const AnchorStrengthTable& s2,
                                              const std::vector<NodeId>& edge) {
    if (edge.empty()) throw std::runtime_error("edge_strength_features: empty edge");
    const std::size_t k = edge.size();

    auto five_stats = [k](const std::vector<double>& xs) {
        double mx = xs[0], mn = xs[0], sum = 0.0;
        for (double v : xs) {
            mx = std::max(mx, v);
            mn = std::min(mn, v);
            sum += v;
        }
        const double mean = sum / static_cast<double>(k);
        double var = 0.0;
        for (double v : xs) var += (v - mean) * (v - mean);
        const double stdev = std::sqrt(var / static_cast<double>(k));
        return std::array<double, 6>{mx, mn, mx - mn, mean, stdev, sum};
    };

    std::vector<double> raw(k);
    for (std::size_t i = 0; i < k; ++i) raw[i] = s2.s2[edge[i]];
    const auto rs = five_stats(raw);

    std::vector<double> norm;
    edge_softmax_nodes(s2.s2, edge, norm);
    const auto ns = five_stats(norm);

    return {rs[0], rs[1], rs[2], rs[3], rs[4], rs[5], ns[0], ns[1], ns[2], ns[3], ns[4]};
}

InductiveResult inductive_aggregate(const Hypergraph& h, const std::vector<double>& s1_scores,
                                    const IncidenceIndex& inc) {
    InductiveResult out;
    out.s1_scores = s1_scores;
    out.proportions.w = 0.0;
    out.proportions.edge_argmax.resize(h.edge_count());
    out.proportions.p_hat.assign(h.node_count(), 0.0);

    for (EdgeId e = 0; e < h.edges.size(); ++e) {
        const std::size_t begin = inc.edge_row_begin[e], end = inc.edge_row_begin[e + 1];
        std::size_t best = begin;
        for (std::size_t r = begin + 1; r < end; ++r)
            if (s1_scores[r] > s1_scores[best]) best = r;
        out.proportions.edge_argmax[e] = inc.node_of_row[best];
        out.proportions.p_hat[inc.node_of_row[best]] += 1.0;
    }
    const auto deg = h.degrees();
    for (std::size_t v = 0; v < out.proportions.p_hat.size(); ++v)
        if (deg[v] > 0) out.proportions.p_hat[v] /= static_cast<double>(deg[v]);
    return out;
}

std::vector<NodeId> rank_edge_members_inductive(const InductiveResult& ind,
                                                const IncidenceIndex& inc, const Hypergraph& h,
                                                EdgeId e) {
    const auto& edge = h.edges[e];
    const std::size_t begin = inc.edge_row_begin[e];
    std::vector<std::size_t> pos(edge.size());
    for (std::size_t i = 0; i < edge.size(); ++i) pos[i] = i;
    std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
        const double pa = ind.proportions.p_hat[edge[a]], pb = ind.proportions.p_hat[edge[b]];
        if (pa != pb) return pa > pb;
        const double sa = ind.s1_scores[begin + a], sb = ind.s1_scores[begin + b];
        if (sa != sb) return sa > sb;
        return edge[a] < edge[b];
    });
    std::vector<NodeId> order(edge.size());
    for (std::size_t i = 0; i < edge.size(); ++i) order[i] = edge[pos[i]];
    return order;
}

}  // namespace anchorradar
