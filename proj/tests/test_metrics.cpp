#include <doctest.h>

#include <cmath>

#include "anchorradar/metrics.hpp"
#include "anchorradar/rng.hpp"

using namespace anchorradar;

TEST_CASE("accuracy examples") {
    using V = std::vector<NodeId>;
    SUBCASE("two of three correct") {
        const std::vector<V> pred{{0}, {1}, {2}};
        const std::vector<V> truth{{0}, {1}, {9}};
        CHECK(accuracy(pred, truth) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("all correct") {
        const std::vector<V> pred{{4}, {5}};
        CHECK(accuracy(pred, pred) == 1.0);
    }
    SUBCASE("multi-anchor needs the full set") {
        const std::vector<V> pred{{0, 1}};
        const std::vector<V> truth{{0, 2}};
        CHECK(accuracy(pred, truth) == 0.0);
        const std::vector<V> truth2{{1, 0}};  // order-insensitive
        CHECK(accuracy(pred, truth2) == 1.0);
    }
    SUBCASE("missing prediction is an error") {
        const std::vector<V> pred{{0}};
        const std::vector<V> truth{{0}, {1}};
        CHECK_THROWS_AS(accuracy(pred, truth), std::runtime_error);
    }
}

TEST_CASE("ndcg examples") {
    using V = std::vector<NodeId>;
    SUBCASE("rank one is ideal") {
        CHECK(ndcg({{7, 8, 9}}, {{7}}) == 1.0);
    }
    SUBCASE("rank three gives one half") {
        CHECK(ndcg({{8, 9, 7}}, {{7}}) == doctest::Approx(0.5));
    }
    SUBCASE("mean over edges") {
        CHECK(ndcg({{7, 8, 9}, {8, 9, 7}}, {{7}, {7}}) == doctest::Approx(0.75));
    }
    SUBCASE("anchor missing from the ranking is an error") {
        CHECK_THROWS_AS(ndcg({{8, 9}}, {{7}}), std::runtime_error);
    }
}

TEST_CASE("mrr examples") {
    SUBCASE("rank one") { CHECK(mrr({{7, 8}}, {{7}}) == 1.0); }
    SUBCASE("rank two") { CHECK(mrr({{8, 7}}, {{7}}) == doctest::Approx(0.5)); }
    SUBCASE("ranks one and four") {
        CHECK(mrr({{7, 1, 2, 3}, {1, 2, 3, 7}}, {{7}, {7}}) == doctest::Approx(0.625));
    }
}

TEST_CASE("per-edge values equal brute-force recomputation") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t size = 2 + rng.next_below(6);
        std::vector<NodeId> ranking(size);
        for (std::size_t i = 0; i < size; ++i) ranking[i] = static_cast<NodeId>(i);
        // deterministic shuffle
        Rng shuffle_rng(trial);
        shuffle_rng.shuffle(ranking);
        const NodeId anchor = static_cast<NodeId>(rng.next_below(size));

        std::size_t rank = 0;
        for (std::size_t i = 0; i < size; ++i)
            if (ranking[i] == anchor) rank = i + 1;

        CHECK(ndcg({ranking}, {{anchor}}) ==
              doctest::Approx(1.0 / std::log2(static_cast<double>(rank) + 1.0)).epsilon(1e-15));
        CHECK(mrr({ranking}, {{anchor}}) ==
              doctest::Approx(1.0 / static_cast<double>(rank)).epsilon(1e-15));
    }
}
