// Command-line driver: dataset statistics, split generation, feature dumps,
// training with ablation switches, prediction, evaluation, and grid tuning.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anchorradar/pipeline.hpp"
#include "anchorradar/rng.hpp"
#include "anchorradar/stats.hpp"

namespace ar = anchorradar;

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

unsigned thread_cap() {
    if (const char* env = std::getenv("ANCHORRADAR_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return 1;
}

std::vector<ar::EdgeId> subset_edges(const ar::Hypergraph& h, const ar::SplitAssignment* splits,
                                     const std::string& subset) {
    std::vector<ar::EdgeId> edges;
    if (subset == "all") {
        for (ar::EdgeId e = 0; e < h.edge_count(); ++e) edges.push_back(e);
        return edges;
    }
    if (!splits) throw std::runtime_error("subset '" + subset + "' requires a split");
    if (subset == "train") return splits->edges_in(ar::Split::train);
    if (subset == "validation") return splits->edges_in(ar::Split::validation);
    if (subset == "test") return splits->edges_in(ar::Split::test);
    if (subset == "excluded") return splits->edges_in(ar::Split::excluded);
    throw std::runtime_error("unknown subset: " + subset);
}

struct CommonOpts {
    std::string data;
    std::string split_file;
    std::vector<double> ratios{0.075, 0.025, 0.90};
    std::uint64_t seed = 1;
};

void add_split_source(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--split", o.split_file, "existing split file");
    cmd->add_option("--ratios", o.ratios, "train,validation,test ratios")->expected(3)->delimiter(',');
    cmd->add_option("--seed", o.seed, "seed for split generation and training");
}

ar::SplitAssignment resolve_splits(const ar::Hypergraph& h, const CommonOpts& o) {
    if (!o.split_file.empty()) return ar::read_split_file(h, o.split_file);
    return ar::make_splits(h, {o.ratios[0], o.ratios[1], o.ratios[2]}, o.seed);
}

int cmd_stats(const CommonOpts& o, const std::string& subset) {
    const ar::Hypergraph h = ar::parse_dataset(o.data);
    std::optional<ar::SplitAssignment> splits;
    if (subset != "all") splits = resolve_splits(h, o);
    const auto edges = subset_edges(h, splits ? &*splits : nullptr, subset);

    const auto sig = ar::purity_significance(h, edges, o.seed);
    const double oracle = ar::proportion_oracle_accuracy(h, edges);
    const double rand_acc = ar::random_baseline(h, edges);

    std::cout << "dataset\tsubset\tedges\tpurity_real_mean\tpurity_real_std_nodes"
                 "\tpurity_random_mean\tp_value\toracle_accuracy\trandom_baseline";
    if (splits) std::cout << "\theuristic_direction\theuristic_test_accuracy";
    std::cout << '\n';
    std::cout << o.data << '\t' << subset << '\t' << edges.size() << '\t' << g17(sig.real_mean)
              << '\t' << g17(sig.real_std) << '\t' << g17(sig.random_mean) << '\t'
              << g17(sig.p_value) << '\t' << g17(oracle) << '\t' << g17(rand_acc);
    if (splits) {
        const auto heur = ar::degree_heuristic(h, *splits);
        std::cout << '\t' << (heur.use_max ? "max" : "min") << '\t' << g17(heur.test_accuracy);
    }
    std::cout << '\n';
    return 0;
}

int cmd_split(const CommonOpts& o, const std::string& out_path) {
    const ar::Hypergraph h = ar::parse_dataset(o.data);
    const auto splits = ar::make_splits(h, {o.ratios[0], o.ratios[1], o.ratios[2]}, o.seed);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    ar::write_split_file(h, splits, out);
    return 0;
}

int cmd_features(const CommonOpts& o, const std::string& extra_file, const std::string& out_path) {
    const ar::Hypergraph h = ar::parse_dataset(o.data);
    std::vector<std::vector<double>> extra;
    if (!extra_file.empty()) extra = ar::read_extra_features(h, extra_file);
    const auto x = ar::feature_matrix(h, extra);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    ar::dump_features_tsv(h, x, out);
    return 0;
}

int cmd_train(ar::RunConfig cfg, int repeat, std::uint64_t seed_base) {
    if (repeat <= 1) {
        const ar::RunResult res = ar::run_train(cfg);
        std::cout << "accuracy\t" << g17(res.test.accuracy) << '\n'
                  << "ndcg\t" << g17(res.test.ndcg) << '\n'
                  << "mrr\t" << g17(res.test.mrr) << '\n'
                  << "validation_accuracy\t" << g17(res.validation_accuracy) << '\n';
        return 0;
    }
    ar::PreparedData data = ar::prepare_data(cfg);
    std::vector<double> accs, ndcgs, mrrs;
    for (int r = 0; r < repeat; ++r) {
        ar::RunConfig run_cfg = cfg;
        run_cfg.seed = seed_base + static_cast<std::uint64_t>(r);
        if (cfg.output_dir)
            run_cfg.output_dir = *cfg.output_dir / ("seed_" + std::to_string(run_cfg.seed));
        const ar::RunResult res = ar::run_train(run_cfg, data);
        accs.push_back(res.test.accuracy);
        ndcgs.push_back(res.test.ndcg);
        mrrs.push_back(res.test.mrr);
        std::cout << "run\tseed=" << run_cfg.seed << "\taccuracy=" << g17(res.test.accuracy)
                  << '\n';
    }
    auto mean_std = [](const std::vector<double>& xs) {
        double m = 0.0;
        for (double v : xs) m += v;
        m /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double v : xs) var += (v - m) * (v - m);
        return std::pair<double, double>(m, std::sqrt(var / static_cast<double>(xs.size())));
    };
    const auto [am, as] = mean_std(accs);
    const auto [nm, ns] = mean_std(ndcgs);
    const auto [mm, ms] = mean_std(mrrs);
    std::cout << "accuracy_mean\t" << g17(am) << "\taccuracy_std\t" << g17(as) << '\n'
              << "ndcg_mean\t" << g17(nm) << "\tndcg_std\t" << g17(ns) << '\n'
              << "mrr_mean\t" << g17(mm) << "\tmrr_std\t" << g17(ms) << '\n';
    return 0;
}

int cmd_predict(const CommonOpts& o, const std::string& model_dir, bool inductive,
                std::size_t k, const std::string& out_path) {
    const ar::Hypergraph h = ar::parse_dataset(o.data);
    const auto x = ar::feature_matrix(h);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);

    if (!inductive) throw std::runtime_error("predict currently supports --inductive only; "
                                             "transductive prediction is part of `train`");

    const ar::Stage1Model model =
        ar::read_stage1_model(std::filesystem::path(model_dir) / "stage1_model.txt");
    const auto scores = ar::mlp_forward(x, model);
    const auto ind = ar::inductive_aggregate(h, scores, x.incidence);

    std::vector<ar::EdgeId> edges;
    for (ar::EdgeId e = 0; e < h.edge_count(); ++e) edges.push_back(e);
    std::vector<std::vector<ar::NodeId>> preds;
    for (ar::EdgeId e : edges) {
        auto order = ar::rank_edge_members_inductive(ind, x.incidence, h, e);
        if (k > order.size()) throw std::runtime_error("k exceeds edge size");
        order.resize(k);
        preds.push_back(std::move(order));
    }
    ar::write_predictions_file(h, edges, preds, out);
    return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& pred_file, const std::string& rankings_file,
             const std::string& subset) {
    const ar::Hypergraph h = ar::parse_dataset(o.data);
    std::optional<ar::SplitAssignment> splits;
    if (!o.split_file.empty()) splits = ar::read_split_file(h, o.split_file);
    const auto edges = subset_edges(h, splits ? &*splits : nullptr, subset);

    auto read_assignments = [&](const std::string& path) {
        std::map<ar::EdgeId, std::vector<ar::NodeId>> out;
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) throw std::runtime_error("bad line in " + path);
            const ar::EdgeId e = static_cast<ar::EdgeId>(std::stoul(line.substr(0, tab)));
            std::vector<ar::NodeId> ids;
            std::istringstream ss(line.substr(tab + 1));
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const auto it = h.name_to_index.find(tok);
                if (it == h.name_to_index.end())
                    throw std::runtime_error("unknown node id '" + tok + "' in " + path);
                ids.push_back(it->second);
            }
            out[e] = std::move(ids);
        }
        return out;
    };

    const auto preds = read_assignments(pred_file);
    std::vector<std::vector<ar::NodeId>> p, truth;
    for (ar::EdgeId e : edges) {
        const auto it = preds.find(e);
        if (it == preds.end())
            throw std::runtime_error("missing prediction for edge " + std::to_string(e));
        p.push_back(it->second);
        truth.push_back(h.anchors[e]);
    }
    std::cout << "metric\tvalue\n";
    std::cout << "accuracy\t" << g17(ar::accuracy(p, truth)) << '\n';
    if (!rankings_file.empty()) {
        const auto ranks = read_assignments(rankings_file);
        std::vector<std::vector<ar::NodeId>> r;
        for (ar::EdgeId e : edges) {
            const auto it = ranks.find(e);
            if (it == ranks.end())
                throw std::runtime_error("missing ranking for edge " + std::to_string(e));
            r.push_back(it->second);
        }
        std::cout << "ndcg\t" << g17(ar::ndcg(r, truth)) << '\n';
        std::cout << "mrr\t" << g17(ar::mrr(r, truth)) << '\n';
    }
    return 0;
}

int cmd_tune(const ar::RunConfig& base, const std::string& table_out) {
    ar::TuneGrids grids;
    const ar::TuneResult result = ar::run_tune(base, grids, thread_cap());

    std::ostream* outp = &std::cout;
    std::ofstream file;
    if (!table_out.empty()) {
        file.open(table_out);
        if (!file) throw std::runtime_error("cannot write " + table_out);
        outp = &file;
    }
    *outp << "lr1\tlr2\talpha\tw\tvalidation_accuracy\n";
    for (const auto& row : result.table) {
        *outp << g17(row.lr1) << '\t' << g17(row.lr2) << '\t' << g17(row.alpha) << '\t'
              << g17(row.w) << '\t' << g17(row.validation_accuracy) << '\n';
    }
    const auto& best = result.table[result.best_index];
    std::cout << "best\tlr1=" << g17(best.lr1) << "\tlr2=" << g17(best.lr2)
              << "\talpha=" << g17(best.alpha) << "\tw=" << g17(best.w)
              << "\tvalidation_accuracy=" << g17(best.validation_accuracy) << '\n';

    const ar::RunResult final = ar::run_train(result.best_config);
    std::cout << "test_accuracy\t" << g17(final.test.accuracy) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AnchorRadar: group anchor identification in hypergraphs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key = value configuration file");

    CommonOpts common;
    std::string subset = "all";
    std::string out_path, extra_file, model_dir, pred_file, rankings_file, table_out, ablation;
    bool inductive = false;
    int repeat = 1;
    std::uint64_t seed_base = 1;

    ar::RunConfig cfg;
    std::string cfg_out_dir;

    auto add_train_options = [&](CLI::App* cmd) {
        cmd->add_option("--data", common.data, "dataset file")->required();
        add_split_source(cmd, common);
        cmd->add_option("--lr1", cfg.lr1, "stage-1 learning rate");
        cmd->add_option("--lr2", cfg.lr2, "stage-2 learning rate");
        cmd->add_option("--alpha", cfg.alpha, "stage-2 alignment coefficient");
        cmd->add_option("--w", cfg.w, "global aggregation weight");
        cmd->add_option("--epochs1", cfg.epochs1, "stage-1 epochs");
        cmd->add_option("--epochs2", cfg.epochs2, "stage-2 epochs");
        cmd->add_option("--hidden-dim", cfg.hidden_dim, "MLP hidden width");
        cmd->add_option("--ablation", ablation, "stage1-only|stage2-only|no-ga|no-lf");
        cmd->add_option("--k", cfg.anchors_per_edge, "anchors predicted per edge");
        cmd->add_option("--extra-features", extra_file, "per-node extra feature file");
        cmd->add_option("--out", cfg_out_dir, "output directory");
    };

    CLI::App* stats = app.add_subcommand("stats", "observation statistics");
    stats->add_option("--data", common.data)->required();
    stats->add_option("--subset", subset, "all|train|validation|test|excluded");
    add_split_source(stats, common);

    CLI::App* split = app.add_subcommand("split", "generate a split file");
    split->add_option("--data", common.data)->required();
    split->add_option("--ratios", common.ratios)->expected(3)->delimiter(',');
    split->add_option("--seed", common.seed);
    split->add_option("--out", out_path)->required();

    CLI::App* features = app.add_subcommand("features", "dump the feature matrix");
    features->add_option("--data", common.data)->required();
    features->add_option("--extra-features", extra_file);
    features->add_option("--out", out_path)->required();

    CLI::App* train = app.add_subcommand("train", "train both stages and evaluate");
    add_train_options(train);
    train->add_option("--repeat", repeat, "number of seeded repetitions");
    train->add_option("--seed-base", seed_base, "first seed when repeating");

    CLI::App* predict = app.add_subcommand("predict", "apply a trained model");
    predict->add_option("--data", common.data)->required();
    predict->add_option("--model", model_dir, "model directory")->required();
    predict->add_flag("--inductive", inductive, "apply a frozen stage-1 model to a new dataset");
    predict->add_option("--k", cfg.anchors_per_edge);
    predict->add_option("--out", out_path)->required();

    CLI::App* eval = app.add_subcommand("eval", "score a prediction file");
    eval->add_option("--data", common.data)->required();
    eval->add_option("--pred", pred_file)->required();
    eval->add_option("--rankings", rankings_file, "full rankings for NDCG/MRR");
    eval->add_option("--split", common.split_file);
    eval->add_option("--subset", subset);

    CLI::App* tune = app.add_subcommand("tune", "grid-search hyperparameters");
    add_train_options(tune);
    tune->add_option("--table-out", table_out, "write the full validation table here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!ablation.empty()) cfg.ablation = ar::ablation_from_name(ablation);
        cfg.data_path = common.data;
        if (!common.split_file.empty()) cfg.split_file = common.split_file;
        cfg.ratios = {common.ratios[0], common.ratios[1], common.ratios[2]};
        cfg.seed = common.seed;
        if (!extra_file.empty()) cfg.extra_features_file = extra_file;
        if (!cfg_out_dir.empty()) cfg.output_dir = cfg_out_dir;

        if (stats->parsed()) return cmd_stats(common, subset);
        if (split->parsed()) return cmd_split(common, out_path);
        if (features->parsed()) return cmd_features(common, extra_file, out_path);
        if (train->parsed()) return cmd_train(cfg, repeat, seed_base);
        if (predict->parsed()) return cmd_predict(common, model_dir, inductive,
                                                  cfg.anchors_per_edge, out_path);
        if (eval->parsed()) return cmd_eval(common, pred_file, rankings_file, subset);
        if (tune->parsed()) {
            if (cfg.ablation == ar::Ablation::stage1_only)
                throw std::runtime_error("tune does not support the stage1-only ablation");
            return cmd_tune(cfg, table_out);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
