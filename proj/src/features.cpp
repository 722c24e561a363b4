#include "anchorradar/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace anchorradar {

std::vector<double> min_max_normalize(std::span<const double> x) {
    std::vector<double> out(x.size(), 0.5);
    if (x.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) return out;  // degenerate: 0.5 everywhere
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - lo) / (hi - lo);
    return out;
}

std::vector<double> rank_normalize(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.5);
    if (n <= 1) return out;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });  // descending

    // fractional ranks: tied values share the mean of their zero-based positions
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) out[order[t]] = mean_rank / static_cast<double>(n - 1);
        i = j + 1;
    }
    return out;
}

namespace {

const std::vector<double>& raw_column(const RawNodeFeatures& raw, std::size_t f) {
    switch (f) {
        case 0: return raw.degree;
        case 1: return raw.eigenvector;
        case 2: return raw.pagerank;
        default: return raw.coreness;
    }
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

// population standard deviation; 0 for a single sample
MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd ms;
    if (xs.empty()) return ms;
    double s = 0.0;
    for (double v : xs) s += v;
    ms.mean = s / static_cast<double>(xs.size());
    double var = 0.0;
    for (double v : xs) var += (v - ms.mean) * (v - ms.mean);
    ms.std = std::sqrt(var / static_cast<double>(xs.size()));
    return ms;
}

}  // namespace

std::vector<double> global_feature_block(const RawNodeFeatures& raw, const Hypergraph& h) {
    const std::size_t n = h.node_count();
    std::vector<double> block(n * 6 * kRawFeatureCount, 0.0);

    for (std::size_t f = 0; f < kRawFeatureCount; ++f) {
        const auto& x = raw_column(raw, f);
        const auto gmm = min_max_normalize(x);
        const auto grk = rank_normalize(x);

        // per-node collections of within-edge normalized values
        std::vector<std::vector<double>> local_mm(n), local_rk(n);
        std::vector<double> edge_vals;
        for (const auto& e : h.edges) {
            edge_vals.clear();
            for (NodeId v : e) edge_vals.push_back(x[v]);
            const auto mm = min_max_normalize(edge_vals);
            const auto rk = rank_normalize(edge_vals);
            for (std::size_t i = 0; i < e.size(); ++i) {
                local_mm[e[i]].push_back(mm[i]);
                local_rk[e[i]].push_back(rk[i]);
            }
        }

        for (std::size_t v = 0; v < n; ++v) {
            double* out = block.data() + v * kGlobalColumns + f * 6;
            const MeanStd ms_mm = mean_std(local_mm[v]);
            const MeanStd ms_rk = mean_std(local_rk[v]);
            out[0] = gmm[v];
            out[1] = grk[v];
            out[2] = ms_mm.mean;
            out[3] = ms_mm.std;
            out[4] = ms_rk.mean;
            out[5] = ms_rk.std;
        }
    }
    return block;
}

std::vector<double> local_feature_block(const RawNodeFeatures& raw, std::span<const NodeId> edge) {
    if (edge.empty()) throw std::runtime_error("local_feature_block: empty edge");
    const std::size_t k = edge.size();
    std::vector<double> block(k * kLocalColumns, 0.0);

    std::vector<double> vals(k);
    for (std::size_t f = 0; f < kRawFeatureCount; ++f) {
        const auto& x = raw_column(raw, f);
        for (std::size_t i = 0; i < k; ++i) vals[i] = x[edge[i]];
        const auto mm = min_max_normalize(vals);
        const auto rk = rank_normalize(vals);
        for (std::size_t i = 0; i < k; ++i) {
            block[i * kLocalColumns + f * 2] = mm[i];
            block[i * kLocalColumns + f * 2 + 1] = rk[i];
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        block[i * kLocalColumns + 8] = static_cast<double>(k);  // EXPERIMENT-RAW
    return block;
}

PairFeatureMatrix feature_matrix(const Hypergraph& h, const RawNodeFeatures& raw,
                                 const std::vector<std::vector<double>>& extra) {
    for (const auto& col : extra) {
        if (col.size() != h.node_count())
            throw std::runtime_error("extra feature column does not cover every node");
    }

    PairFeatureMatrix x;
    x.incidence = build_incidence(h);
    x.columns = kBaseColumns + extra.size();
    x.values.assign(x.incidence.rows() * x.columns, 0.0);

    const auto global = global_feature_block(raw, h);

    std::size_t r = 0;
    for (EdgeId e = 0; e < h.edges.size(); ++e) {
        const auto& mem = h.edges[e];
        const auto local = local_feature_block(raw, mem);
        for (std::size_t i = 0; i < mem.size(); ++i, ++r) {
            double* row = x.row_data(r);
            const double* g = global.data() + static_cast<std::size_t>(mem[i]) * kGlobalColumns;
            std::copy(g, g + kGlobalColumns, row);
            std::copy(local.data() + i * kLocalColumns, local.data() + (i + 1) * kLocalColumns,
                      row + kGlobalColumns);
            for (std::size_t c = 0; c < extra.size(); ++c)
                row[kBaseColumns + c] = extra[c][mem[i]];
        }
    }
    // EXPERIMENT: min-max the size column over edges
    {
        double lo = 1e300, hi = -1e300;
        for (std::size_t rr = 0; rr < x.rows(); ++rr) {
            lo = std::min(lo, x.row(rr)[32]);
            hi = std::max(hi, x.row(rr)[32]);
        }
        for (std::size_t rr = 0; rr < x.rows(); ++rr) {
            double* row = x.row_data(rr);
            row[32] = (hi == lo) ? 0.5 : (row[32] - lo) / (hi - lo);
        }
    }
    return x;
}

PairFeatureMatrix feature_matrix(const Hypergraph& h, const std::vector<std::vector<double>>& extra) {
    return feature_matrix(h, raw_node_features(h), extra);
}

void zero_local_columns(PairFeatureMatrix& x) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
        double* row = x.row_data(r);
        std::fill(row + kGlobalColumns, row + kBaseColumns, 0.0);
    }
}

void dump_features_tsv(const Hypergraph& h, const PairFeatureMatrix& x, std::ostream& out) {
    out << "edge_idx\tnode_id";
    for (std::size_t c = 0; c < x.columns; ++c) {
        if (c < kBaseColumns)
            out << "\tf" << c;
        else
            out << "\tx" << (c - kBaseColumns);
    }
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < x.rows(); ++r) {
        out << x.incidence.edge_of_row[r] << '\t' << h.node_names[x.incidence.node_of_row[r]];
        const auto row = x.row(r);
        for (std::size_t c = 0; c < x.columns; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            out << '\t' << buf;
        }
        out << '\n';
    }
}

}  // namespace anchorradar
