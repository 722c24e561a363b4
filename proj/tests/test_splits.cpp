#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "anchorradar/splits.hpp"

using namespace anchorradar;

namespace {

Hypergraph from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset_text(in, "<test>");
}

// n unique pair edges over distinct nodes
Hypergraph chain_graph(int n) {
    std::string text;
    for (int i = 0; i < n; ++i) {
        text += "a" + std::to_string(i) + ",b" + std::to_string(i) + "\ta" + std::to_string(i) + "\n";
    }
    return from_text(text);
}

}  // namespace

TEST_CASE("floor counts with minimum one per bucket") {
    const Hypergraph h = chain_graph(40);
    const auto s = make_splits(h, {0.075, 0.025, 0.90}, 1);
    CHECK(s.count(Split::train) == 3);
    CHECK(s.count(Split::validation) == 1);
    CHECK(s.count(Split::test) == 36);
}

TEST_CASE("tiny datasets still get non-empty train and validation") {
    const Hypergraph h = chain_graph(5);
    const auto s = make_splits(h, {0.075, 0.025, 0.90}, 3);
    CHECK(s.count(Split::train) == 1);
    CHECK(s.count(Split::validation) == 1);
    CHECK(s.count(Split::test) == 3);
}

TEST_CASE("same seed gives identical assignment, different seeds differ") {
    const Hypergraph h = chain_graph(200);
    const auto s1 = make_splits(h, {0.075, 0.025, 0.90}, 42);
    const auto s2 = make_splits(h, {0.075, 0.025, 0.90}, 42);
    CHECK(s1.edge_split == s2.edge_split);
    const auto s3 = make_splits(h, {0.075, 0.025, 0.90}, 43);
    CHECK(s1.edge_split != s3.edge_split);
}

TEST_CASE("duplicate edges share one split label") {
    const Hypergraph h = from_text(
        "a,b\ta\n"
        "a,b\tb\n"
        "a,b\ta\n"
        "c,d\tc\n"
        "e,f\te\n"
        "g,h\tg\n");
    const auto s = make_splits(h, {0.4, 0.2, 0.4}, 9);
    CHECK(s.edge_split[0] == s.edge_split[1]);
    CHECK(s.edge_split[1] == s.edge_split[2]);
}

TEST_CASE("size-1 edges are excluded from every split") {
    const Hypergraph h = from_text(
        "x\tx\n"
        "a,b\ta\n"
        "c,d\tc\n"
        "e,f\te\n");
    const auto s = make_splits(h, {0.075, 0.025, 0.9}, 5);
    CHECK(s.edge_split[0] == Split::excluded);
    CHECK(s.count(Split::excluded) == 1);
}

TEST_CASE("every eligible unique key gets exactly one label") {
    const Hypergraph h = chain_graph(57);
    const auto s = make_splits(h, {0.075, 0.025, 0.9}, 11);
    CHECK(s.count(Split::train) + s.count(Split::validation) + s.count(Split::test) == 57);
}

TEST_CASE("fewer than three unique keys is an error") {
    const Hypergraph h = chain_graph(2);
    CHECK_THROWS_AS(make_splits(h, {0.075, 0.025, 0.9}, 1), std::runtime_error);
}

TEST_CASE("ratios must sum to one") {
    const Hypergraph h = chain_graph(10);
    CHECK_THROWS_AS(make_splits(h, {0.5, 0.5, 0.5}, 1), std::runtime_error);
}

TEST_CASE("split file round-trip") {
    const Hypergraph h = from_text(
        "a,b\ta\n"
        "x\tx\n"
        "c,d\tc\n"
        "e,f\te\n"
        "a,b\tb\n");
    const auto s = make_splits(h, {0.34, 0.33, 0.33}, 8);
    std::ostringstream out;
    write_split_file(h, s, out);

    const auto tmp = std::filesystem::temp_directory_path() / "ar_split_test.tsv";
    {
        std::ofstream f(tmp);
        f << out.str();
    }
    const auto s2 = read_split_file(h, tmp);
    CHECK(s2.edge_split == s.edge_split);
    std::filesystem::remove(tmp);
}
