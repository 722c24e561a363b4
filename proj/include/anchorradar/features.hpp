#ifndef ANCHORRADAR_FEATURES_HPP
#define ANCHORRADAR_FEATURES_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "anchorradar/centrality.hpp"
#include "anchorradar/hypergraph.hpp"

namespace anchorradar {

inline constexpr std::size_t kRawFeatureCount = 4;   // degree, eigenvector, pagerank, coreness
inline constexpr std::size_t kGlobalColumns = 24;    // 4 raw x 6 normalizations/aggregations
inline constexpr std::size_t kLocalColumns = 9;      // 4 raw x 2 + edge size
inline constexpr std::size_t kBaseColumns = kGlobalColumns + kLocalColumns;

// One feature row per (edge, member) incidence, edge order then sorted-member
// order. Column layout, per raw feature f in {degree, eigenvector, pagerank,
// coreness}:
//   global block (f*6 + 0..5): min-max, rank, mean/std of local min-max,
//                              mean/std of local rank
//   local block (24 + f*2, 24 + f*2 + 1): within-edge min-max, within-edge rank
//   column 32: |e| as a real
// Optional extra per-node columns are appended after column 32.
struct PairFeatureMatrix {
    std::size_t columns = 0;
    std::vector<double> values;  // row-major, rows() x columns
    IncidenceIndex incidence;

    std::size_t rows() const { return columns == 0 ? 0 : values.size() / columns; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * columns, columns}; }
    double* row_data(std::size_t r) { return values.data() + r * columns; }
};

// Min-max to [0,1]; all-equal inputs map to 0.5.
std::vector<double> min_max_normalize(std::span<const double> x);

// Fractional (average) descending ranks, zero-indexed, divided by n-1; the
// largest value maps to 0, ties share the mean of their positions. A single
// element maps to 0.5.
std::vector<double> rank_normalize(std::span<const double> x);

// 24 global columns per node (layout above).
std::vector<double> global_feature_block(const RawNodeFeatures& raw, const Hypergraph& h);

// 9 local columns for the members of one edge, in sorted-member order.
std::vector<double> local_feature_block(const RawNodeFeatures& raw, std::span<const NodeId> edge);

// Full matrix; `extra` (optional) holds per-node appended columns.
PairFeatureMatrix feature_matrix(const Hypergraph& h,
                                 const std::vector<std::vector<double>>& extra = {});

PairFeatureMatrix feature_matrix(const Hypergraph& h, const RawNodeFeatures& raw,
                                 const std::vector<std::vector<double>>& extra);

// zero the 9 local columns in place (ablation without local features)
void zero_local_columns(PairFeatureMatrix& x);

// TSV dump: header `edge_idx node_id f0..f{k-1}`, 17 significant digits
void dump_features_tsv(const Hypergraph& h, const PairFeatureMatrix& x, std::ostream& out);

}  // namespace anchorradar

#endif
