#ifndef ANCHORRADAR_HYPERGRAPH_HPP
#define ANCHORRADAR_HYPERGRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace anchorradar {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// Node set, hyperedge multiset, and per-edge anchor labels.
//
// Hyperedges are stored in file order; members within an edge are kept as a
// sorted set of dense node indices. Duplicate hyperedges (identical member
// sets) stay distinct entries but share one key in `unique_index`.
class Hypergraph {
public:
    std::vector<std::string> node_names;                      // dense index -> external id
    std::unordered_map<std::string, NodeId> name_to_index;
    std::vector<std::vector<NodeId>> edges;                   // sorted member sets
    std::vector<std::vector<NodeId>> anchors;                 // sorted, subset of the edge
    std::map<std::vector<NodeId>, std::vector<EdgeId>> unique_index;

    std::size_t node_count() const { return node_names.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::size_t incidence_count() const;

    // d_v: number of edges containing v, counting multiplicity and size-1 edges
    std::vector<std::uint32_t> degrees() const;

    // throws if some edge has |anchors| != 1
    void require_single_anchor() const;

    void rebuild_unique_index();
};

// Rows of the incidence table in edge order, then sorted-member order.
// The per-pair objects (feature rows, stage-1 scores) all share this layout.
struct IncidenceIndex {
    std::vector<EdgeId> edge_of_row;
    std::vector<NodeId> node_of_row;
    std::vector<std::size_t> edge_row_begin;  // size edges+1

    std::size_t rows() const { return node_of_row.size(); }
    std::size_t row_of(const Hypergraph& h, EdgeId e, NodeId v) const;
};

IncidenceIndex build_incidence(const Hypergraph& h);

// Text format: `<id>,<id>,...<TAB><anchor_id>[,<anchor_id>...]`,
// '#'-prefixed comment lines ignored. Dense indices assigned first-seen.
Hypergraph parse_dataset(const std::filesystem::path& path);
Hypergraph parse_dataset_text(std::istream& in, const std::string& origin);

// Serialization that round-trips ids, edge order, and anchors bit-exactly.
void write_dataset(const Hypergraph& h, std::ostream& out);

// canonical node-set key: sorted dense indices joined by ','
std::string canonical_key(const std::vector<NodeId>& sorted_members);

}  // namespace anchorradar

#endif
