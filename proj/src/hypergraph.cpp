#include "anchorradar/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace anchorradar {

std::size_t Hypergraph::incidence_count() const {
    std::size_t n = 0;
    for (const auto& e : edges) n += e.size();
    return n;
}

std::vector<std::uint32_t> Hypergraph::degrees() const {
    std::vector<std::uint32_t> d(node_count(), 0);
    for (const auto& e : edges)
        for (NodeId v : e) ++d[v];
    return d;
}

void Hypergraph::require_single_anchor() const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (anchors[i].size() != 1) {
            throw std::runtime_error("edge " + std::to_string(i) + " has " +
                                     std::to_string(anchors[i].size()) +
                                     " anchors; single-anchor mode requires exactly one");
        }
    }
}

void Hypergraph::rebuild_unique_index() {
    unique_index.clear();
    for (EdgeId i = 0; i < edges.size(); ++i) unique_index[edges[i]].push_back(i);
}

IncidenceIndex build_incidence(const Hypergraph& h) {
    IncidenceIndex idx;
    idx.edge_row_begin.reserve(h.edge_count() + 1);
    idx.edge_of_row.reserve(h.incidence_count());
    idx.node_of_row.reserve(h.incidence_count());
    idx.edge_row_begin.push_back(0);
    for (EdgeId e = 0; e < h.edges.size(); ++e) {
        for (NodeId v : h.edges[e]) {
            idx.edge_of_row.push_back(e);
            idx.node_of_row.push_back(v);
        }
        idx.edge_row_begin.push_back(idx.node_of_row.size());
    }
    return idx;
}

std::size_t IncidenceIndex::row_of(const Hypergraph& h, EdgeId e, NodeId v) const {
    const auto& mem = h.edges[e];
    const auto it = std::lower_bound(mem.begin(), mem.end(), v);
    if (it == mem.end() || *it != v)
        throw std::runtime_error("node not a member of edge " + std::to_string(e));
    return edge_row_begin[e] + static_cast<std::size_t>(it - mem.begin());
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t nxt = s.find(sep, pos);
        if (nxt == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, nxt - pos));
        pos = nxt + 1;
    }
    return out;
}

[[noreturn]] void parse_fail(const std::string& origin, std::size_t lineno, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

Hypergraph parse_dataset_text(std::istream& in, const std::string& origin) {
    Hypergraph h;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) parse_fail(origin, lineno, "missing tab separator");
        const std::string member_part = line.substr(0, tab);
        const std::string anchor_part = line.substr(tab + 1);
        if (member_part.empty()) parse_fail(origin, lineno, "empty member list");
        if (anchor_part.empty()) parse_fail(origin, lineno, "empty anchor list");

        std::vector<NodeId> members;
        for (const std::string& tok : split_on(member_part, ',')) {
            if (tok.empty()) parse_fail(origin, lineno, "empty member id");
            auto [it, inserted] = h.name_to_index.try_emplace(tok, static_cast<NodeId>(h.node_names.size()));
            if (inserted) h.node_names.push_back(tok);
            members.push_back(it->second);
        }
        std::sort(members.begin(), members.end());
        if (std::adjacent_find(members.begin(), members.end()) != members.end())
            parse_fail(origin, lineno, "duplicate node within edge");

        std::vector<NodeId> anc;
        for (const std::string& tok : split_on(anchor_part, ',')) {
            if (tok.empty()) parse_fail(origin, lineno, "empty anchor id");
            const auto it = h.name_to_index.find(tok);
            if (it == h.name_to_index.end() || !std::binary_search(members.begin(), members.end(), it->second))
                parse_fail(origin, lineno, "anchor '" + tok + "' is not a member of the edge");
            anc.push_back(it->second);
        }
        std::sort(anc.begin(), anc.end());
        anc.erase(std::unique(anc.begin(), anc.end()), anc.end());

        h.edges.push_back(std::move(members));
        h.anchors.push_back(std::move(anc));
    }
    h.rebuild_unique_index();
    return h;
}

Hypergraph parse_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());
    return parse_dataset_text(in, path.filename().string());
}

void write_dataset(const Hypergraph& h, std::ostream& out) {
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
        const auto& e = h.edges[i];
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (j) out << ',';
            out << h.node_names[e[j]];
        }
        out << '\t';
        const auto& a = h.anchors[i];
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j) out << ',';
            out << h.node_names[a[j]];
        }
        out << '\n';
    }
}

std::string canonical_key(const std::vector<NodeId>& sorted_members) {
    std::string key;
    for (std::size_t i = 0; i < sorted_members.size(); ++i) {
        if (i) key += ',';
        key += std::to_string(sorted_members[i]);
    }
    return key;
}

}  // namespace anchorradar
