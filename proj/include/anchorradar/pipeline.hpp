#ifndef ANCHORRADAR_PIPELINE_HPP
#define ANCHORRADAR_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anchorradar/features.hpp"
#include "anchorradar/hypergraph.hpp"
#include "anchorradar/metrics.hpp"
#include "anchorradar/splits.hpp"
#include "anchorradar/stage1.hpp"
#include "anchorradar/stage2.hpp"

namespace anchorradar {

enum class Ablation { none, stage1_only, stage2_only, no_ga, no_lf };

const char* ablation_name(Ablation a);
Ablation ablation_from_name(const std::string& name);

struct RunConfig {
    std::filesystem::path data_path;
    std::optional<std::filesystem::path> split_file;
    std::array<double, 3> ratios{0.075, 0.025, 0.90};
    double lr1 = 0.01;
    double lr2 = 0.01;
    double alpha = 0.1;
    double w = 1.0;
    std::size_t epochs1 = 100;
    std::size_t epochs2 = 100;
    std::size_t hidden_dim = 64;
    Ablation ablation = Ablation::none;
    std::size_t anchors_per_edge = 1;
    std::optional<std::filesystem::path> extra_features_file;
    std::optional<std::filesystem::path> output_dir;
    std::uint64_t seed = 1;

    void validate() const;  // throws on inconsistent settings
};

struct RunResult {
    MetricsReport test;
    double validation_accuracy = 0.0;
    double final_train_loss_stage1 = 0.0;
    Stage1Model model;
    AnchorStrengthTable strengths;
    AggregatedProportions proportions;
    SplitAssignment splits;
};

// Loaded-and-featurized dataset, reusable across configurations.
struct PreparedData {
    Hypergraph h;
    PairFeatureMatrix features;          // with local columns
    PairFeatureMatrix features_no_local; // built lazily for the no-lf ablation
    bool no_local_built = false;
};

PreparedData prepare_data(const RunConfig& cfg);

// features -> stage1 -> stage2 -> aggregate -> predict -> eval, honoring the
// ablation switches. Artifacts are written when cfg.output_dir is set.
RunResult run_train(const RunConfig& cfg);
RunResult run_train(const RunConfig& cfg, PreparedData& data);

// per-node extra feature columns: `<node_id>\t<x0>[\t<x1>...]`
std::vector<std::vector<double>> read_extra_features(const Hypergraph& h,
                                                     const std::filesystem::path& path);

struct TuneGrids {
    std::vector<double> lr1{0.001, 0.01, 0.1};
    std::vector<double> lr2{0.001, 0.01, 0.1};
    std::vector<double> alpha;  // defaults to {0, 0.01..0.09, 0.1..1}
    std::vector<double> w{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    TuneGrids();
};

struct TuneEntry {
    double lr1, lr2, alpha, w;
    double validation_accuracy;
};

struct TuneResult {
    std::vector<TuneEntry> table;   // enumeration order: lr1, lr2, alpha, w
    std::size_t best_index = 0;     // max validation accuracy, ties -> first
    RunConfig best_config;
};

// Exhaustive grid search selecting the best validation accuracy. Stage-1
// training depends only on lr1 and stage-2 only on (lr1, lr2, alpha), so the
// shared prefixes are computed once; results are identical to independent
// runs because each stage is seeded separately. `threads` caps parallel
// evaluation of stage-2 configurations.
TuneResult run_tune(const RunConfig& base, const TuneGrids& grids, unsigned threads = 1);

void write_metrics_tsv(const MetricsReport& m, double validation_accuracy, std::ostream& out);
void write_strengths_file(const Hypergraph& h, const AnchorStrengthTable& s2,
                          const AggregatedProportions& p, std::ostream& out);
void write_predictions_file(const Hypergraph& h, const std::vector<EdgeId>& edges,
                            const std::vector<std::vector<NodeId>>& preds, std::ostream& out);
void write_rankings_file(const Hypergraph& h, const std::vector<EdgeId>& edges,
                         const std::vector<std::vector<NodeId>>& rankings, std::ostream& out);

}  // namespace anchorradar

#endif
