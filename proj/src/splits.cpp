#include "anchorradar/splits.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <ostream>
#include <stdexcept>
#include <string>

#include "anchorradar/rng.hpp"

namespace anchorradar {

const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
        case Split::excluded: return "excluded";
    }
    return "?";
}

std::vector<EdgeId> SplitAssignment::edges_in(Split s) const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edge_split.size(); ++e)
        if (edge_split[e] == s) out.push_back(e);
    return out;
}

std::size_t SplitAssignment::count(Split s) const {
    std::size_t n = 0;
    for (Split x : edge_split) n += (x == s);
    return n;
}

SplitAssignment make_splits(const Hypergraph& h, std::array<double, 3> ratios, std::uint64_t seed) {
    const double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::runtime_error("split ratios must sum to 1");
    if (h.edge_count() == 0) throw std::runtime_error("empty hypergraph");

    // eligible unique keys in first-seen order
    std::vector<std::vector<NodeId>> keys;
    {
        std::set<std::vector<NodeId>> seen;
        for (const auto& e : h.edges) {
            if (e.size() < 2) continue;
            if (seen.insert(e).second) keys.push_back(e);
        }
    }
    const std::size_t K = keys.size();
    if (K < 3) throw std::runtime_error("not enough unique hyperedges to split (need >= 3)");

    Rng rng(seed);
    rng.shuffle(keys);

    const std::size_t n_train = std::max<std::size_t>(1, static_cast<std::size_t>(ratios[0] * static_cast<double>(K)));
    const std::size_t n_val = std::max<std::size_t>(1, static_cast<std::size_t>(ratios[1] * static_cast<double>(K)));
    if (n_train + n_val >= K) throw std::runtime_error("ratios leave no test edges");

    std::map<std::vector<NodeId>, Split> label;
    for (std::size_t i = 0; i < K; ++i) {
        Split s = Split::test;
        if (i < n_train)
            s = Split::train;
        else if (i < n_train + n_val)
            s = Split::validation;
        label[keys[i]] = s;
    }

    SplitAssignment out;
    out.seed = seed;
    out.ratios = ratios;
    out.edge_split.resize(h.edge_count(), Split::excluded);
    for (EdgeId e = 0; e < h.edges.size(); ++e) {
        if (h.edges[e].size() < 2) continue;
        out.edge_split[e] = label.at(h.edges[e]);
    }
    return out;
}

void write_split_file(const Hypergraph& h, const SplitAssignment& s, std::ostream& out) {
    // one line per unique key, in key order
    for (const auto& [key, positions] : h.unique_index) {
        out << canonical_key(key) << '\t' << split_name(s.edge_split[positions.front()]) << '\n';
    }
}

SplitAssignment read_split_file(const Hypergraph& h, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open split file: " + path.string());

    std::map<std::string, Split> by_key;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": missing tab");
        const std::string key = line.substr(0, tab);
        const std::string lab = line.substr(tab + 1);
        Split s;
        if (lab == "train") s = Split::train;
        else if (lab == "validation") s = Split::validation;
        else if (lab == "test") s = Split::test;
        else if (lab == "excluded") s = Split::excluded;
        else throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": unknown label '" + lab + "'");
        by_key[key] = s;
    }

    SplitAssignment out;
    out.edge_split.resize(h.edge_count(), Split::excluded);
    for (const auto& [key, positions] : h.unique_index) {
        const auto it = by_key.find(canonical_key(key));
        if (it == by_key.end()) {
            if (key.size() < 2) continue;  // size-1 edges may be omitted
            throw std::runtime_error("split file misses key " + canonical_key(key));
        }
        for (EdgeId e : positions) out.edge_split[e] = it->second;
    }
    return out;
}

}  // namespace anchorradar
