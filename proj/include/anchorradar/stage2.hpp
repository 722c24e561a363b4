#ifndef ANCHORRADAR_STAGE2_HPP
#define ANCHORRADAR_STAGE2_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "anchorradar/hypergraph.hpp"
#include "anchorradar/splits.hpp"

namespace anchorradar {

// One learnable scalar per node, initialized to exactly 1.
struct AnchorStrengthTable {
    std::vector<double> s2;
};

// Where the stage-1 alignment term sums. `train_anchors` is the loss as
// printed (anchor terms over the labeled edges); `unlabeled_incidences`
// aligns the two within-edge softmaxes over every member of the unlabeled
// (validation + test) edges, which is the semi-supervised form the reported
// accuracies come from. With `train_anchors`, nodes outside the labeled
// edges receive no gradient at all and keep their initial strength.
enum class AlignmentMode { train_anchors, unlabeled_incidences };

struct Stage2Config {
    double learning_rate = 0.1;
    double alpha = 0.1;   // weight of the stage-1 alignment term
    std::size_t epochs = 100;
    std::uint64_t seed = 1;
    AlignmentMode alignment = AlignmentMode::unlabeled_incidences;
};

// L1 + alpha * L2 over the train edges, both within-edge max-stabilized:
//   L1 = -sum_e log softmax_e(s2)[A(e)]
//   L2 = -sum_e softmax_e(s2)[A(e)] * softmax_e(s1)[A(e)]
// Multi-anchor edges sum each term over all anchors.
double stage2_loss(const std::vector<double>& s2, const std::vector<double>& s1_scores,
                   const Hypergraph& h, const IncidenceIndex& inc,
                   const std::vector<EdgeId>& train_edges, double alpha);

// Analytic gradient w.r.t. every node strength; returns the loss.
double stage2_loss_gradient(const std::vector<double>& s2, const std::vector<double>& s1_scores,
                            const Hypergraph& h, const IncidenceIndex& inc,
                            const std::vector<EdgeId>& train_edges, double alpha,
                            std::vector<double>& grad_out);

// Semi-supervised alignment: -sum over the given edges of
// <softmax_e(s2), softmax_e(s1)> across all members.
double stage2_alignment_loss(const std::vector<double>& s2, const std::vector<double>& s1_scores,
                             const Hypergraph& h, const IncidenceIndex& inc,
                             const std::vector<EdgeId>& edges);

double stage2_alignment_gradient(const std::vector<double>& s2,
                                 const std::vector<double>& s1_scores, const Hypergraph& h,
                                 const IncidenceIndex& inc, const std::vector<EdgeId>& edges,
                                 std::vector<double>& grad_accum, double scale);

// 100 Adam epochs on the strengths only; stage-1 scores stay frozen.
AnchorStrengthTable train_stage2(const Hypergraph& h, const std::vector<double>& s1_scores,
                                 const IncidenceIndex& inc, const SplitAssignment& splits,
                                 const Stage2Config& cfg);

struct AggregatedProportions {
    std::vector<double> p_hat;          // per node, in [0, w]
    std::vector<NodeId> edge_argmax;    // provisional choice per edge
    double w = 1.0;
};

// Per-edge argmax of the strengths over all edges (strength ties broken by a
// seeded uniform pick, edge-index-seeded), then
//   p_hat_v = (w * #{train edges anchored by v} + #{other edges choosing v}) / d_v
// with d_v the full degree over all edges including the excluded ones.
AggregatedProportions global_aggregate(const AnchorStrengthTable& s2, const Hypergraph& h,
                                       const SplitAssignment& splits, double w,
                                       std::uint64_t seed);

// Deterministic member ranking used for prediction and rank metrics: by p_hat
// descending, ties by higher s2, then lower node index.
std::vector<NodeId> rank_edge_members(const AggregatedProportions& p,
                                      const AnchorStrengthTable& s2,
                                      const std::vector<NodeId>& edge);

// Ranking for the no-global-aggregation ablation: by s2, ties by lower index.
std::vector<NodeId> rank_edge_members_by_strength(const AnchorStrengthTable& s2,
                                                  const std::vector<NodeId>& edge);

// top-k members of each target edge
std::vector<std::vector<NodeId>> predict(const AggregatedProportions& p,
                                         const AnchorStrengthTable& s2, const Hypergraph& h,
                                         const std::vector<EdgeId>& target_edges,
                                         std::size_t k = 1);

// Eleven order statistics of the strengths within one edge: max, min,
// max-min, mean, population stdev, sum of the raw strengths, then the same
// five order statistics (without the sum) of the within-edge softmax-
// normalized strengths.
std::array<double, 11> edge_strength_features(const AnchorStrengthTable& s2,
                                              const std::vector<NodeId>& edge);

// Inductive application of a frozen stage-1 scorer: every edge is treated as
// unlabeled, the provisional choice is the within-edge argmax of the stage-1
// scores, and p_hat reduces to chosen-count / degree.
struct InductiveResult {
    AggregatedProportions proportions;
    std::vector<double> s1_scores;  // per incidence
};

InductiveResult inductive_aggregate(const Hypergraph& h, const std::vector<double>& s1_scores,
                                    const IncidenceIndex& inc);

// Ranking in inductive mode: p_hat descending, ties by the member's stage-1
// score in this edge, then lower node index.
std::vector<NodeId> rank_edge_members_inductive(const InductiveResult& ind,
                                                const IncidenceIndex& inc, const Hypergraph& h,
                                                EdgeId e);

}  // namespace anchorradar

#endif
