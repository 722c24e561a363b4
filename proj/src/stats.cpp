#include "anchorradar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "anchorradar/rng.hpp"

namespace anchorradar {

namespace {

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double v : xs) s += v;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double pop_std(const std::vector<double>& xs, double mean) {
    if (xs.empty()) return 0.0;
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

double sample_var(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    return var / static_cast<double>(xs.size() - 1);
}

double choose2(double n) { return n * (n - 1.0) / 2.0; }

AnchorStats stats_from_flags(std::size_t node_count,
                             const std::vector<std::vector<char>>& flags) {
    AnchorStats out;
    out.anchor_degree.assign(node_count, 0);
    out.subset_degree.assign(node_count, 0);
    out.proportion.assign(node_count, 0.0);
    out.purity.assign(node_count, std::nullopt);
    for (std::size_t v = 0; v < node_count; ++v) {
        const auto& fl = flags[v];
        const std::uint32_t d = static_cast<std::uint32_t>(fl.size());
        std::uint32_t delta = 0;
        for (char f : fl) delta += f;
        out.subset_degree[v] = d;
        out.anchor_degree[v] = delta;
        if (d > 0) out.proportion[v] = static_cast<double>(delta) / static_cast<double>(d);
        if (d >= 2) {
            const double same = choose2(delta) + choose2(d - delta);
            out.purity[v] = same / choose2(d);
        }
    }
    return out;
}

}  // namespace

double AnchorStats::purity_mean() const {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& p : purity)
        if (p) {
            s += *p;
            ++n;
        }
    return n == 0 ? 0.0 : s / static_cast<double>(n);
}

double AnchorStats::purity_std() const {
    const double m = purity_mean();
    double var = 0.0;
    std::size_t n = 0;
    for (const auto& p : purity)
        if (p) {
            var += (*p - m) * (*p - m);
            ++n;
        }
    return n == 0 ? 0.0 : std::sqrt(var / static_cast<double>(n));
}

std::size_t AnchorStats::purity_count() const {
    std::size_t n = 0;
    for (const auto& p : purity) n += p.has_value();
    return n;
}

AnchorStats anchor_stats(const Hypergraph& h, const std::vector<EdgeId>& edges) {
    std::vector<std::vector<char>> flags(h.node_count());
    for (EdgeId e : edges) {
        const auto& anc = h.anchors[e];
        for (NodeId v : h.edges[e])
            flags[v].push_back(std::binary_search(anc.begin(), anc.end(), v) ? 1 : 0);
    }
    return stats_from_flags(h.node_count(), flags);
}

PuritySignificance purity_significance(const Hypergraph& h, const std::vector<EdgeId>& edges,
                                       std::uint64_t seed) {
    std::vector<std::vector<char>> flags(h.node_count()), flags_rand(h.node_count());
    Rng rng(mix_seed(seed, 0x70757269ULL));
    for (EdgeId e : edges) {
        const auto& edge = h.edges[e];
        const auto& anc = h.anchors[e];
        const NodeId rand_anchor = edge[rng.next_below(edge.size())];
        for (NodeId v : edge) {
            flags[v].push_back(std::binary_search(anc.begin(), anc.end(), v) ? 1 : 0);
            flags_rand[v].push_back(v == rand_anchor ? 1 : 0);
        }
    }
    const AnchorStats real = stats_from_flags(h.node_count(), flags);
    const AnchorStats rand = stats_from_flags(h.node_count(), flags_rand);

    std::vector<double> xs, ys;
    for (const auto& p : real.purity)
        if (p) xs.push_back(*p);
    for (const auto& p : rand.purity)
        if (p) ys.push_back(*p);
    if (xs.size() < 2 || ys.size() < 2)
        throw std::runtime_error("purity significance: need >= 2 purity-eligible nodes");

    PuritySignificance out;
    out.real_mean = mean_of(xs);
    out.real_std = pop_std(xs, out.real_mean);
    out.random_mean = mean_of(ys);
    out.random_std = pop_std(ys, out.random_mean);

    const double n1 = static_cast<double>(xs.size()), n2 = static_cast<double>(ys.size());
    const double v1 = sample_var(xs, out.real_mean), v2 = sample_var(ys, out.random_mean);
    const double se2 = v1 / n1 + v2 / n2;
    if (se2 == 0.0) {
        out.t_statistic = 0.0;
        out.p_value = out.real_mean > out.random_mean ? 0.0 : (out.real_mean < out.random_mean ? 1.0 : 0.5);
        return out;
    }
    out.t_statistic = (out.real_mean - out.random_mean) / std::sqrt(se2);
    const double df = se2 * se2 /
                      ((v1 / n1) * (v1 / n1) / (n1 - 1.0) + (v2 / n2) * (v2 / n2) / (n2 - 1.0));
    const boost::math::students_t dist(df);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.t_statistic));
    return out;
}

double proportion_oracle_accuracy(const Hypergraph& h, const std::vector<EdgeId>& edges) {
    if (edges.empty()) throw std::runtime_error("proportion oracle: no edges");
    const AnchorStats st = anchor_stats(h, edges);
    std::size_t correct = 0;
    for (EdgeId e : edges) {
        const auto& edge = h.edges[e];
        NodeId best = edge[0];
        for (NodeId v : edge)
            if (st.proportion[v] > st.proportion[best]) best = v;  // tie keeps lower index
        const auto& anc = h.anchors[e];
        correct += (anc.size() == 1 && anc[0] == best);
    }
    return static_cast<double>(correct) / static_cast<double>(edges.size());
}

namespace {

double degree_rule_accuracy(const Hypergraph& h, const std::vector<std::uint32_t>& deg,
                            const std::vector<EdgeId>& edges, bool use_max) {
    std::size_t correct = 0;
    for (EdgeId e : edges) {
        const auto& edge = h.edges[e];
        NodeId best = edge[0];
        for (NodeId v : edge) {
            if (use_max ? deg[v] > deg[best] : deg[v] < deg[best]) best = v;  // tie: lower index
        }
        const auto& anc = h.anchors[e];
        correct += std::binary_search(anc.begin(), anc.end(), best);
    }
    return edges.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(edges.size());
}

}  // namespace

DegreeHeuristicResult degree_heuristic(const Hypergraph& h, const SplitAssignment& splits) {
    const auto train = splits.edges_in(Split::train);
    const auto test = splits.edges_in(Split::test);
    if (train.empty()) throw std::runtime_error("degree heuristic: empty train split");
    const auto deg = h.degrees();

    const double acc_max = degree_rule_accuracy(h, deg, train, true);
    const double acc_min = degree_rule_accuracy(h, deg, train, false);

    DegreeHeuristicResult out;
    out.use_max = acc_max >= acc_min;  // tie -> max
    out.train_accuracy = out.use_max ? acc_max : acc_min;
    out.test_accuracy = degree_rule_accuracy(h, deg, test, out.use_max);
    return out;
}

double random_baseline(const Hypergraph& h, const std::vector<EdgeId>& edges) {
    if (edges.empty()) return 0.0;
    double s = 0.0;
    for (EdgeId e : edges)
        s += static_cast<double>(h.anchors[e].size()) / static_cast<double>(h.edges[e].size());
    return s / static_cast<double>(edges.size());
}

}  // namespace anchorradar
