#include "anchorradar/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "anchorradar/rng.hpp"

namespace anchorradar {

namespace {

constexpr std::uint64_t kStage1SeedTag = 1;
constexpr std::uint64_t kStage2SeedTag = 2;
constexpr std::uint64_t kAggregateSeedTag = 3;

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const char* ablation_name(Ablation a) {
    switch (a) {
        case Ablation::none: return "none";
        case Ablation::stage1_only: return "stage1-only";
        case Ablation::stage2_only: return "stage2-only";
        case Ablation::no_ga: return "no-ga";
        case Ablation::no_lf: return "no-lf";
    }
    return "?";
}

Ablation ablation_from_name(const std::string& name) {
    if (name.empty() || name == "none") return Ablation::none;
    if (name == "stage1-only") return Ablation::stage1_only;
    if (name == "stage2-only") return Ablation::stage2_only;
    if (name == "no-ga") return Ablation::no_ga;
    if (name == "no-lf") return Ablation::no_lf;
    throw std::runtime_error("unknown ablation: " + name);
}

void RunConfig::validate() const {
    if (lr1 <= 0.0 || lr2 <= 0.0) throw std::runtime_error("learning rates must be > 0");
    if (alpha < 0.0) throw std::runtime_error("alpha must be >= 0");
    if (w < 0.0) throw std::runtime_error("w must be >= 0");
    if (anchors_per_edge < 1) throw std::runtime_error("anchors per edge must be >= 1");
    if (hidden_dim < 1) throw std::runtime_error("hidden dimension must be >= 1");
}

std::vector<std::vector<double>> read_extra_features(const Hypergraph& h,
                                                     const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open extra feature file: " + path.string());
    std::vector<std::vector<double>> columns;
    std::vector<char> seen(h.node_count(), 0);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string id;
        if (!std::getline(ss, id, '\t'))
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad line");
        const auto it = h.name_to_index.find(id);
        if (it == h.name_to_index.end()) continue;  // extra rows for unused nodes are fine
        std::vector<double> vals;
        std::string tok;
        while (std::getline(ss, tok, '\t')) vals.push_back(std::stod(tok));
        if (columns.empty()) columns.resize(vals.size());
        if (vals.size() != columns.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": inconsistent column count");
        for (std::size_t c = 0; c < vals.size(); ++c) {
            if (columns[c].empty()) columns[c].assign(h.node_count(), 0.0);
            columns[c][it->second] = vals[c];
        }
        seen[it->second] = 1;
    }
    for (std::size_t v = 0; v < seen.size(); ++v) {
        if (!seen[v])
            throw std::runtime_error("extra feature file misses node '" + h.node_names[v] + "'");
    }
    return columns;
}

PreparedData prepare_data(const RunConfig& cfg) {
    PreparedData d;
    d.h = parse_dataset(cfg.data_path);
    if (cfg.anchors_per_edge == 1) d.h.require_single_anchor();

    std::vector<std::vector<double>> extra;
    if (cfg.extra_features_file) extra = read_extra_features(d.h, *cfg.extra_features_file);
    d.features = feature_matrix(d.h, extra);
    return d;
}

namespace {

const PairFeatureMatrix& features_for(PreparedData& data, const RunConfig& cfg) {
    if (cfg.ablation != Ablation::no_lf) return data.features;
    if (!data.no_local_built) {
        data.features_no_local = data.features;
        zero_local_columns(data.features_no_local);
        data.no_local_built = true;
    }
    return data.features_no_local;
}

std::vector<NodeId> rank_by_stage1(const Hypergraph& h, const IncidenceIndex& inc,
                                   const std::vector<double>& scores, EdgeId e) {
    const auto& edge = h.edges[e];
    const std::size_t begin = inc.edge_row_begin[e];
    std::vector<std::size_t> pos(edge.size());
    for (std::size_t i = 0; i < edge.size(); ++i) pos[i] = i;
    std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
        if (scores[begin + a] != scores[begin + b]) return scores[begin + a] > scores[begin + b];
        return edge[a] < edge[b];
    });
    std::vector<NodeId> order(edge.size());
    for (std::size_t i = 0; i < edge.size(); ++i) order[i] = edge[pos[i]];
    return order;
}

struct EvalOutcome {
    MetricsReport metrics;
    std::vector<std::vector<NodeId>> predictions;
    std::vector<std::vector<NodeId>> rankings;
};

EvalOutcome evaluate_on(const Hypergraph& h, const std::vector<EdgeId>& edges,
                        const std::vector<std::vector<NodeId>>& rankings, std::size_t k,
                        std::uint64_t seed) {
    EvalOutcome out;
    out.rankings = rankings;
    out.predictions.reserve(edges.size());
    std::vector<std::vector<NodeId>> truth;
    truth.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const EdgeId e = edges[i];
        if (k > h.edges[e].size())
            throw std::runtime_error("k exceeds edge size for edge " + std::to_string(e));
        std::vector<NodeId> top(rankings[i].begin(), rankings[i].begin() + k);
        out.predictions.push_back(std::move(top));
        truth.push_back(h.anchors[e]);
    }
    out.metrics.accuracy = accuracy(out.predictions, truth);
    out.metrics.ndcg = ndcg(out.rankings, truth);
    out.metrics.mrr = mrr(out.rankings, truth);
    out.metrics.edge_count = edges.size();
    out.metrics.seed = seed;
    return out;
}

}  // namespace

RunResult run_train(const RunConfig& cfg, PreparedData& data) {
    cfg.validate();
    const Hypergraph& h = data.h;
    const PairFeatureMatrix& x = features_for(data, cfg);

    RunResult res;
    if (cfg.split_file)
        res.splits = read_split_file(h, *cfg.split_file);
    else
        res.splits = make_splits(h, cfg.ratios, cfg.seed);

    // stage 1
    Stage1Config s1cfg;
    s1cfg.learning_rate = cfg.lr1;
    s1cfg.epochs = cfg.epochs1;
    s1cfg.hidden_dim = cfg.hidden_dim;
    s1cfg.seed = mix_seed(cfg.seed, kStage1SeedTag);
    Stage1Result s1 = train_stage1(h, x, res.splits, s1cfg);
    res.model = std::move(s1.model);
    res.final_train_loss_stage1 = s1.epoch_losses.empty() ? 0.0 : s1.epoch_losses.back();

    const auto test_edges = res.splits.edges_in(Split::test);
    const auto val_edges = res.splits.edges_in(Split::validation);

    auto rank_all = [&](const std::vector<EdgeId>& edges) {
        std::vector<std::vector<NodeId>> rankings;
        rankings.reserve(edges.size());
        for (EdgeId e : edges) {
            switch (cfg.ablation) {
                case Ablation::stage1_only:
                    rankings.push_back(rank_by_stage1(h, x.incidence, s1.scores, e));
                    break;
                case Ablation::no_ga:
                    rankings.push_back(rank_edge_members_by_strength(res.strengths, h.edges[e]));
                    break;
                default:
                    rankings.push_back(rank_edge_members(res.proportions, res.strengths, h.edges[e]));
            }
        }
        return rankings;
    };

    if (cfg.ablation != Ablation::stage1_only) {
        Stage2Config s2cfg;
        s2cfg.learning_rate = cfg.lr2;
        s2cfg.alpha = cfg.ablation == Ablation::stage2_only ? 0.0 : cfg.alpha;
        s2cfg.epochs = cfg.epochs2;
        s2cfg.seed = mix_seed(cfg.seed, kStage2SeedTag);
        res.strengths = train_stage2(h, s1.scores, x.incidence, res.splits, s2cfg);
        res.proportions = global_aggregate(res.strengths, h, res.splits, cfg.w,
                                           mix_seed(cfg.seed, kAggregateSeedTag));
    }

    const EvalOutcome test_out = evaluate_on(h, test_edges, rank_all(test_edges),
                                             cfg.anchors_per_edge, cfg.seed);
    res.test = test_out.metrics;
    if (!val_edges.empty()) {
        const EvalOutcome val_out = evaluate_on(h, val_edges, rank_all(val_edges),
                                                cfg.anchors_per_edge, cfg.seed);
        res.validation_accuracy = val_out.metrics.accuracy;
    }

    if (cfg.output_dir) {
        namespace fs = std::filesystem;
        const fs::path dir = *cfg.output_dir;
        fs::create_directories(dir);
        {
            std::ofstream out(dir / "config.txt");
            out << "data = " << cfg.data_path.string() << '\n'
                << "seed = " << cfg.seed << '\n'
                << "ratios = " << cfg.ratios[0] << ',' << cfg.ratios[1] << ',' << cfg.ratios[2] << '\n'
                << "lr1 = " << format_g17(cfg.lr1) << '\n'
                << "lr2 = " << format_g17(cfg.lr2) << '\n'
                << "alpha = " << format_g17(cfg.alpha) << '\n'
                << "w = " << format_g17(cfg.w) << '\n'
                << "epochs1 = " << cfg.epochs1 << '\n'
                << "epochs2 = " << cfg.epochs2 << '\n'
                << "hidden-dim = " << cfg.hidden_dim << '\n'
                << "ablation = " << ablation_name(cfg.ablation) << '\n'
                << "anchors-per-edge = " << cfg.anchors_per_edge << '\n';
        }
        {
            std::ofstream out(dir / "split.tsv");
            write_split_file(h, res.splits, out);
        }
        {
            std::ofstream out(dir / "stage1_model.txt");
            write_stage1_model(res.model, out);
        }
        if (cfg.ablation != Ablation::stage1_only) {
            std::ofstream out(dir / "strengths.tsv");
            write_strengths_file(h, res.strengths, res.proportions, out);
        }
        {
            std::ofstream out(dir / "predictions.tsv");
            write_predictions_file(h, test_edges, test_out.predictions, out);
        }
        {
            std::ofstream out(dir / "rankings.tsv");
            write_rankings_file(h, test_edges, test_out.rankings, out);
        }
        {
            std::ofstream out(dir / "metrics.tsv");
            write_metrics_tsv(res.test, res.validation_accuracy, out);
        }
    }
    return res;
}

RunResult run_train(const RunConfig& cfg) {
    PreparedData data = prepare_data(cfg);
    return run_train(cfg, data);
}

TuneGrids::TuneGrids() {
    alpha.push_back(0.0);
    for (int i = 1; i <= 9; ++i) alpha.push_back(i / 100.0);
    for (int i = 1; i <= 10; ++i) alpha.push_back(i / 10.0);
}

TuneResult run_tune(const RunConfig& base, const TuneGrids& grids, unsigned threads) {
    if (grids.lr1.empty() || grids.lr2.empty() || grids.alpha.empty() || grids.w.empty())
        throw std::runtime_error("tune: empty grid");
    base.validate();

    PreparedData data = prepare_data(base);
    const Hypergraph& h = data.h;

    RunConfig probe = base;
    const PairFeatureMatrix& x = features_for(data, probe);

    SplitAssignment splits;
    if (base.split_file)
        splits = read_split_file(h, *base.split_file);
    else
        splits = make_splits(h, base.ratios, base.seed);
    const auto val_edges = splits.edges_in(Split::validation);
    if (val_edges.empty()) throw std::runtime_error("tune: empty validation split");

    TuneResult out;
    const std::size_t n_stage2 = grids.lr2.size() * grids.alpha.size();
    out.table.resize(grids.lr1.size() * n_stage2 * grids.w.size());

    for (std::size_t i1 = 0; i1 < grids.lr1.size(); ++i1) {
        Stage1Config s1cfg;
        s1cfg.learning_rate = grids.lr1[i1];
        s1cfg.epochs = base.epochs1;
        s1cfg.hidden_dim = base.hidden_dim;
        s1cfg.seed = mix_seed(base.seed, kStage1SeedTag);
        const Stage1Result s1 = train_stage1(h, x, splits, s1cfg);

        // each (lr2, alpha) cell trains one stage-2 table and sweeps w
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            std::vector<std::vector<NodeId>> preds;
            std::vector<std::vector<NodeId>> truth;
            while (true) {
                const std::size_t cell = next.fetch_add(1);
                if (cell >= n_stage2) break;
                const std::size_t i2 = cell / grids.alpha.size();
                const std::size_t ia = cell % grids.alpha.size();

                Stage2Config s2cfg;
                s2cfg.learning_rate = grids.lr2[i2];
                s2cfg.alpha = grids.alpha[ia];
                s2cfg.epochs = base.epochs2;
                s2cfg.seed = mix_seed(base.seed, kStage2SeedTag);
                const AnchorStrengthTable table =
                    train_stage2(h, s1.scores, x.incidence, splits, s2cfg);

                for (std::size_t iw = 0; iw < grids.w.size(); ++iw) {
                    const AggregatedProportions p = global_aggregate(
                        table, h, splits, grids.w[iw], mix_seed(base.seed, kAggregateSeedTag));
                    preds.clear();
                    truth.clear();
                    for (EdgeId e : val_edges) {
                        auto order = base.ablation == Ablation::no_ga
                                         ? rank_edge_members_by_strength(table, h.edges[e])
                                         : rank_edge_members(p, table, h.edges[e]);
                        order.resize(base.anchors_per_edge);
                        preds.push_back(std::move(order));
                        truth.push_back(h.anchors[e]);
                    }
                    const double val_acc = accuracy(preds, truth);
                    const std::size_t idx =
                        ((i1 * grids.lr2.size() + i2) * grids.alpha.size() + ia) * grids.w.size() + iw;
                    out.table[idx] = TuneEntry{grids.lr1[i1], grids.lr2[i2], grids.alpha[ia],
                                               grids.w[iw], val_acc};
                }
            }
        };

        const unsigned n_threads = std::max(1u, threads);
        if (n_threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
    }

    out.best_index = 0;
    for (std::size_t i = 1; i < out.table.size(); ++i)
        if (out.table[i].validation_accuracy > out.table[out.best_index].validation_accuracy)
            out.best_index = i;

    out.best_config = base;
    out.best_config.lr1 = out.table[out.best_index].lr1;
    out.best_config.lr2 = out.table[out.best_index].lr2;
    out.best_config.alpha = out.table[out.best_index].alpha;
    out.best_config.w = out.table[out.best_index].w;
    return out;
}

void write_metrics_tsv(const MetricsReport& m, double validation_accuracy, std::ostream& out) {
    out << "metric\tvalue\n";
    out << "accuracy\t" << format_g17(m.accuracy) << '\n';
    out << "ndcg\t" << format_g17(m.ndcg) << '\n';
    out << "mrr\t" << format_g17(m.mrr) << '\n';
    out << "validation_accuracy\t" << format_g17(validation_accuracy) << '\n';
    out << "test_edges\t" << m.edge_count << '\n';
    out << "seed\t" << m.seed << '\n';
}

void write_strengths_file(const Hypergraph& h, const AnchorStrengthTable& s2,
                          const AggregatedProportions& p, std::ostream& out) {
    for (std::size_t v = 0; v < h.node_count(); ++v) {
        out << h.node_names[v] << '\t' << format_g17(s2.s2[v]) << '\t' << format_g17(p.p_hat[v])
            << '\n';
    }
}

void write_predictions_file(const Hypergraph& h, const std::vector<EdgeId>& edges,
                            const std::vector<std::vector<NodeId>>& preds, std::ostream& out) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out << edges[i] << '\t';
        for (std::size_t j = 0; j < preds[i].size(); ++j) {
            if (j) out << ',';
            out << h.node_names[preds[i][j]];
        }
        out << '\n';
    }
}

void write_rankings_file(const Hypergraph& h, const std::vector<EdgeId>& edges,
                         const std::vector<std::vector<NodeId>>& rankings, std::ostream& out) {
    write_predictions_file(h, edges, rankings, out);
}

}  // namespace anchorradar
