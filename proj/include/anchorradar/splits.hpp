#ifndef ANCHORRADAR_SPLITS_HPP
#define ANCHORRADAR_SPLITS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "anchorradar/hypergraph.hpp"

namespace anchorradar {

enum class Split : std::uint8_t { train, validation, test, excluded };

const char* split_name(Split s);

// Per-edge split labels. All duplicates of a unique hyperedge carry the same
// label; size-1 edges are `excluded` and never enter train/validation/test.
struct SplitAssignment {
    std::vector<Split> edge_split;
    std::uint64_t seed = 0;
    std::array<double, 3> ratios{};

    std::vector<EdgeId> edges_in(Split s) const;
    std::size_t count(Split s) const;
};

// Seeded permutation of the eligible (size >= 2) unique keys, then floor
// counts with a minimum of one per bucket: first max(1, floor(r_train*K))
// keys -> train, next max(1, floor(r_val*K)) -> validation, rest -> test.
SplitAssignment make_splits(const Hypergraph& h, std::array<double, 3> ratios, std::uint64_t seed);

// Split file: `<canonical node-set key>\t<train|validation|test|excluded>`
void write_split_file(const Hypergraph& h, const SplitAssignment& s, std::ostream& out);
SplitAssignment read_split_file(const Hypergraph& h, const std::filesystem::path& path);

}  // namespace anchorradar

#endif
