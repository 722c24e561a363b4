#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anchorradar/rng.hpp"
#include "anchorradar/stats.hpp"

using namespace anchorradar;

namespace {

Hypergraph from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset_text(in, "<test>");
}

std::vector<EdgeId> all_edges(const Hypergraph& h) {
    std::vector<EdgeId> out(h.edge_count());
    for (EdgeId e = 0; e < h.edge_count(); ++e) out[e] = e;
    return out;
}

}  // namespace

TEST_CASE("anchor stats on hand-built cases") {
    SUBCASE("delta 2 of 4 gives purity one third") {
        // v anchors edges 0,1 and is a plain member of 2,3
        const Hypergraph h = from_text(
            "v,a\tv\n"
            "v,b\tv\n"
            "v,c\tc\n"
            "v,d\td\n");
        const auto st = anchor_stats(h, all_edges(h));
        const NodeId v = h.name_to_index.at("v");
        CHECK(st.anchor_degree[v] == 2);
        CHECK(st.subset_degree[v] == 4);
        CHECK(st.proportion[v] == doctest::Approx(0.5));
        REQUIRE(st.purity[v].has_value());
        CHECK(*st.purity[v] == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("always anchor: purity and proportion one") {
        const Hypergraph h = from_text("v,a\tv\nv,b\tv\n");
        const auto st = anchor_stats(h, all_edges(h));
        const NodeId v = h.name_to_index.at("v");
        CHECK(*st.purity[v] == 1.0);
        CHECK(st.proportion[v] == 1.0);
    }
    SUBCASE("never anchor: purity one, proportion zero") {
        const Hypergraph h = from_text("v,a\ta\nv,b\tb\nv,c\tc\n");
        const auto st = anchor_stats(h, all_edges(h));
        const NodeId v = h.name_to_index.at("v");
        CHECK(*st.purity[v] == 1.0);
        CHECK(st.proportion[v] == 0.0);
    }
    SUBCASE("degree below two has no purity") {
        const Hypergraph h = from_text("v,a\tv\na,b\ta\n");
        const auto st = anchor_stats(h, all_edges(h));
        CHECK_FALSE(st.purity[h.name_to_index.at("v")].has_value());
        CHECK(st.purity[h.name_to_index.at("a")].has_value());
    }
}

TEST_CASE("closed-form purity equals brute-force pair enumeration") {
    Rng rng(55);
    for (int trial = 0; trial < 40; ++trial) {
        std::string text;
        const int m = 2 + static_cast<int>(rng.next_below(29));  // up to 30 edges
        for (int e = 0; e < m; ++e) {
            std::vector<std::string> mem;
            const std::size_t size = 2 + rng.next_below(4);
            for (std::size_t i = 0; i < size; ++i) {
                std::string id = "n" + std::to_string(rng.next_below(12));
                if (std::find(mem.begin(), mem.end(), id) == mem.end()) mem.push_back(id);
            }
            for (std::size_t i = 0; i < mem.size(); ++i) text += (i ? "," : "") + mem[i];
            text += "\t" + mem[rng.next_below(mem.size())] + "\n";
        }
        const Hypergraph h = from_text(text);
        const auto st = anchor_stats(h, all_edges(h));

        // brute force: fraction of unordered edge pairs with matching anchor flag
        for (std::size_t v = 0; v < h.node_count(); ++v) {
            std::vector<int> flags;
            for (EdgeId e = 0; e < h.edge_count(); ++e) {
                const auto& mem = h.edges[e];
                if (!std::binary_search(mem.begin(), mem.end(), static_cast<NodeId>(v))) continue;
                flags.push_back(h.anchors[e][0] == v ? 1 : 0);
            }
            if (flags.size() < 2) {
                CHECK_FALSE(st.purity[v].has_value());
                continue;
            }
            std::size_t agree = 0, total = 0;
            for (std::size_t i = 0; i < flags.size(); ++i)
                for (std::size_t j = i + 1; j < flags.size(); ++j) {
                    ++total;
                    agree += (flags[i] == flags[j]);
                }
            REQUIRE(st.purity[v].has_value());
            CHECK(*st.purity[v] == static_cast<double>(agree) / static_cast<double>(total));
        }
    }
}

TEST_CASE("purity significance directions") {
    // perfectly pure data: every node always or never the anchor
    std::string text;
    for (int i = 0; i < 120; ++i)
        text += "h" + std::to_string(i % 6) + ",t" + std::to_string(i % 20) + "\th" +
                std::to_string(i % 6) + "\n";
    const Hypergraph h = from_text(text);
    const auto sig = purity_significance(h, all_edges(h), 1);
    CHECK(sig.real_mean == doctest::Approx(1.0));
    CHECK(sig.p_value < 1e-4);
    CHECK(sig.random_mean < sig.real_mean);

    // one-sidedness: with real below random the p-value exceeds one half
    PuritySignificance flipped = sig;
    CHECK(flipped.t_statistic > 0.0);
}

TEST_CASE("anchors that are already uniform-random give p near 0.5 in distribution") {
    // each trial draws a fresh dataset whose anchors are uniform among the
    // members, so real and randomized purities are exchangeable
    Rng rng(99);
    double sum_p = 0.0;
    const int trials = 24;
    for (int trial = 0; trial < trials; ++trial) {
        std::string text;
        for (int e = 0; e < 200; ++e) {
            const int a = static_cast<int>(rng.next_below(30));
            int b = static_cast<int>(rng.next_below(30));
            if (a == b) b = (b + 1) % 30;
            const bool pick_a = rng.next_unit() < 0.5;
            text += "n" + std::to_string(a) + ",n" + std::to_string(b) + "\tn" +
                    std::to_string(pick_a ? a : b) + "\n";
        }
        const Hypergraph h = from_text(text);
        sum_p += purity_significance(h, all_edges(h), 1000 + trial).p_value;
    }
    const double mean_p = sum_p / trials;
    // mean of iid U-ish p-values, ~0.29/sqrt(24) standard error
    CHECK(mean_p > 0.25);
    CHECK(mean_p < 0.75);
}

TEST_CASE("one-sidedness: real below random pushes p past one half") {
    // anchors deliberately alternate across a node's edges -> anti-pure
    std::string text;
    for (int i = 0; i < 100; ++i)
        text += "h" + std::to_string(i % 5) + ",t" + std::to_string(i % 25) + "\t" +
                ((i / 5) % 2 == 0 ? "h" + std::to_string(i % 5) : "t" + std::to_string(i % 25)) +
                "\n";
    const Hypergraph h = from_text(text);
    const auto sig = purity_significance(h, all_edges(h), 3);
    if (sig.real_mean < sig.random_mean) CHECK(sig.p_value > 0.5);
}

TEST_CASE("proportion oracle on labeled patterns") {
    SUBCASE("separable: always-or-never anchors give a perfect oracle") {
        const Hypergraph h = from_text(
            "a,b\ta\n"
            "a,c\ta\n"
            "b,c\tb\n"
            "b,d\tb\n");
        CHECK(proportion_oracle_accuracy(h, all_edges(h)) == 1.0);
    }
    SUBCASE("conflicting duplicates cap the oracle") {
        const Hypergraph h = from_text(
            "a,b\ta\n"
            "a,b\tb\n");
        // p_a = p_b = 0.5; tie goes to the lower index (a): one of two right
        CHECK(proportion_oracle_accuracy(h, all_edges(h)) == doctest::Approx(0.5));
    }
}

TEST_CASE("degree heuristic picks the better direction on train data") {
    SUBCASE("anchors are always the minimum-degree member") {
        // hub nodes h0,h1 appear everywhere; anchors are fresh leaves
        std::string text;
        for (int i = 0; i < 12; ++i)
            text += "hub" + std::to_string(i % 2) + ",leaf" + std::to_string(i) + "\tleaf" +
                    std::to_string(i) + "\n";
        const Hypergraph h = from_text(text);
        const auto s = make_splits(h, {0.4, 0.2, 0.4}, 2);
        const auto res = degree_heuristic(h, s);
        CHECK_FALSE(res.use_max);
        CHECK(res.test_accuracy == 1.0);
    }
    SUBCASE("uniform degrees predict the tie-break node in the max direction") {
        const Hypergraph h = from_text(
            "a,b\tb\n"
            "c,d\tc\n"
            "e,f\te\n"
            "g,i\tg\n");
        const auto s = make_splits(h, {0.3, 0.3, 0.4}, 1);
        const auto res = degree_heuristic(h, s);
        CHECK(res.use_max);  // tie between directions resolves to max
    }
}

TEST_CASE("analytic random baseline") {
    SUBCASE("pair edges give one half") {
        const Hypergraph h = from_text("a,b\ta\nc,d\tc\n");
        CHECK(random_baseline(h, all_edges(h)) == 0.5);
    }
    SUBCASE("sizes two and four average to 0.375") {
        const Hypergraph h = from_text("a,b\ta\nc,d,e,f\tc\n");
        CHECK(random_baseline(h, all_edges(h)) == doctest::Approx(0.375));
    }
    SUBCASE("restricting the subset skips other edges") {
        const Hypergraph h = from_text("a\ta\nb,c\tb\n");
        CHECK(random_baseline(h, {1}) == 0.5);
    }
}

TEST_CASE("random baseline matches Monte Carlo within three standard errors") {
    const Hypergraph h = from_text(
        "a,b\ta\n"
        "c,d,e\tc\n"
        "f,g,i,j\tf\n"
        "k,l\tk\n");
    const auto edges = all_edges(h);
    const double analytic = random_baseline(h, edges);

    Rng rng(2024);
    const int trials = 100000;
    std::int64_t correct = 0;
    for (int t = 0; t < trials; ++t) {
        for (EdgeId e : edges) {
            const auto& mem = h.edges[e];
            const NodeId guess = mem[rng.next_below(mem.size())];
            correct += (guess == h.anchors[e][0]);
        }
    }
    const double n = static_cast<double>(trials) * static_cast<double>(edges.size());
    const double mc = static_cast<double>(correct) / n;
    const double se = std::sqrt(analytic * (1.0 - analytic) / n);
    CHECK(std::abs(mc - analytic) <= 3.0 * se);
}
