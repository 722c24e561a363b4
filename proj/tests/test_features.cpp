#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "anchorradar/features.hpp"
#include "anchorradar/rng.hpp"

using namespace anchorradar;

namespace {

Hypergraph from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset_text(in, "<test>");
}

}  // namespace

TEST_CASE("min-max normalization") {
    const std::vector<double> x{5, 3, 1};
    const auto out = min_max_normalize(x);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 0.5);
    CHECK(out[2] == 0.0);
    const std::vector<double> flat{4, 4, 4};
    for (double v : min_max_normalize(flat)) CHECK(v == 0.5);
}

TEST_CASE("descending fractional rank normalization") {
    const std::vector<double> x{5, 3, 1};
    const auto out = rank_normalize(x);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.5);
    CHECK(out[2] == 1.0);

    const std::vector<double> tied{2, 2, 2};
    for (double v : rank_normalize(tied)) CHECK(v == 0.5);

    // two tied at the top share positions 0 and 1 -> rank 0.5 each
    const std::vector<double> pair{7, 7, 1};
    const auto pr = rank_normalize(pair);
    CHECK(pr[0] == doctest::Approx(0.25));
    CHECK(pr[1] == doctest::Approx(0.25));
    CHECK(pr[2] == 1.0);

    const std::vector<double> single{3};
    CHECK(rank_normalize(single)[0] == 0.5);
}

TEST_CASE("global block layout and degenerate rules") {
    // degrees: a=2, b=1, c=1
    const Hypergraph h = from_text("a,b\ta\na,c\ta\n");
    const auto raw = raw_node_features(h);
    const auto block = global_feature_block(raw, h);
    REQUIRE(block.size() == 3 * kGlobalColumns);
    const NodeId a = h.name_to_index.at("a");
    const NodeId b = h.name_to_index.at("b");
    // degree is raw feature 0: global min-max at column 0
    CHECK(block[a * kGlobalColumns + 0] == 1.0);
    CHECK(block[b * kGlobalColumns + 0] == 0.0);
    // global rank: a first (0), b and c tie on positions 1,2 -> 1.5/2
    CHECK(block[a * kGlobalColumns + 1] == 0.0);
    CHECK(block[b * kGlobalColumns + 1] == doctest::Approx(0.75));
    // node b sits in exactly one edge: aggregation stds (cols 3 and 5) are 0
    CHECK(block[b * kGlobalColumns + 3] == 0.0);
    CHECK(block[b * kGlobalColumns + 5] == 0.0);
}

TEST_CASE("local block for a two-member edge") {
    const Hypergraph h = from_text("a,b\ta\na,c\ta\na,d\ta\na,e\ta\nb,c\tb\n");
    const auto raw = raw_node_features(h);
    // degrees: a=4, b=2, c=2, d=1, e=1
    const std::vector<NodeId> edge{h.name_to_index.at("a"), h.name_to_index.at("b")};
    const auto block = local_feature_block(raw, edge);
    REQUIRE(block.size() == 2 * kLocalColumns);
    // degree min-max within the edge: a -> 1, b -> 0
    CHECK(block[0 * kLocalColumns + 0] == 1.0);
    CHECK(block[1 * kLocalColumns + 0] == 0.0);
    // degree rank: a -> 0, b -> 1
    CHECK(block[0 * kLocalColumns + 1] == 0.0);
    CHECK(block[1 * kLocalColumns + 1] == 1.0);
    // size column
    CHECK(block[0 * kLocalColumns + 8] == 2.0);
    CHECK(block[1 * kLocalColumns + 8] == 2.0);
}

TEST_CASE("size-1 edge gets the degenerate local block") {
    const Hypergraph h = from_text("a\ta\na,b\ta\n");
    const auto raw = raw_node_features(h);
    const std::vector<NodeId> singleton{h.name_to_index.at("a")};
    const auto block = local_feature_block(raw, singleton);
    for (std::size_t c = 0; c < 8; ++c) CHECK(block[c] == 0.5);
    CHECK(block[8] == 1.0);
}

TEST_CASE("matrix shape and duplicated edges") {
    const Hypergraph h = from_text("a,b\ta\n");
    const auto x = feature_matrix(h);
    CHECK(x.rows() == 2);
    CHECK(x.columns == 33);

    const Hypergraph h2 = from_text("a,b,c\ta\na,b,c\tb\nd,e\td\n");
    const auto x2 = feature_matrix(h2);
    CHECK(x2.rows() == 8);
    // duplicated edge rows carry identical values
    for (std::size_t c = 0; c < x2.columns; ++c) {
        CHECK(x2.row(0)[c] == x2.row(3)[c]);
        CHECK(x2.row(1)[c] == x2.row(4)[c]);
        CHECK(x2.row(2)[c] == x2.row(5)[c]);
    }
}

TEST_CASE("extra columns append after the base block") {
    const Hypergraph h = from_text("a,b\ta\n");
    std::vector<std::vector<double>> extra{{10.0, 20.0}, {1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
    const auto x = feature_matrix(h, extra);
    CHECK(x.columns == 37);
    CHECK(x.row(0)[33] == 10.0);
    CHECK(x.row(1)[33] == 20.0);
    CHECK(x.row(1)[36] == 6.0);

    std::vector<std::vector<double>> incomplete{{1.0}};
    CHECK_THROWS_AS(feature_matrix(h, incomplete), std::runtime_error);
}

TEST_CASE("normalized columns stay in the unit interval, size is raw") {
    Rng rng(31);
    std::string text;
    for (int e = 0; e < 30; ++e) {
        std::vector<std::string> mem;
        const std::size_t size = 1 + rng.next_below(6);
        for (std::size_t i = 0; i < size; ++i) {
            std::string id = "n" + std::to_string(rng.next_below(15));
            if (std::find(mem.begin(), mem.end(), id) == mem.end()) mem.push_back(id);
        }
        for (std::size_t i = 0; i < mem.size(); ++i) text += (i ? "," : "") + mem[i];
        text += "\t" + mem[0] + "\n";
    }
    const Hypergraph h = from_text(text);
    const auto x = feature_matrix(h);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 0; c < 32; ++c) {
            CHECK(row[c] >= 0.0);
            CHECK(row[c] <= 1.0);
        }
        CHECK(row[32] >= 1.0);
    }
}

TEST_CASE("feature values are invariant to node insertion order") {
    const std::string forward = "a,b,c\ta\nb,c\tb\nc,d\tc\n";
    const std::string reversed = "c,d\tc\nb,c\tb\na,b,c\ta\n";
    const Hypergraph h1 = from_text(forward);
    const Hypergraph h2 = from_text(reversed);
    const auto x1 = feature_matrix(h1);
    const auto x2 = feature_matrix(h2);

    // compare row of (edge {a,b,c}, node "b") across the two parse orders
    auto row_for = [](const Hypergraph& h, const PairFeatureMatrix& x, std::size_t edge_pos,
                      const std::string& name) {
        const NodeId v = h.name_to_index.at(name);
        const std::size_t r = x.incidence.row_of(h, static_cast<EdgeId>(edge_pos), v);
        return std::vector<double>(x.row(r).begin(), x.row(r).end());
    };
    const auto r1 = row_for(h1, x1, 0, "b");
    const auto r2 = row_for(h2, x2, 2, "b");
    for (std::size_t c = 0; c < 33; ++c) CHECK(r1[c] == doctest::Approx(r2[c]).epsilon(1e-12));
}

TEST_CASE("zeroing local columns keeps globals") {
    const Hypergraph h = from_text("a,b\ta\nb,c\tb\n");
    auto x = feature_matrix(h);
    zero_local_columns(x);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = kGlobalColumns; c < kBaseColumns; ++c) CHECK(x.row(r)[c] == 0.0);
    }
}
