#ifndef ANCHORRADAR_STAGE1_HPP
#define ANCHORRADAR_STAGE1_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "anchorradar/features.hpp"
#include "anchorradar/hypergraph.hpp"
#include "anchorradar/splits.hpp"

namespace anchorradar {

// Two-layer perceptron mapping one feature row to one real score:
//   score(x) = W2 . relu(W1^T x + b1) + b2
// Parameter count: D_h * (n_f + 2) + 1.
struct Stage1Model {
    std::size_t n_f = 0;
    std::size_t d_h = 0;
    std::vector<double> w1;  // n_f x d_h, row-major (input-major)
    std::vector<double> b1;  // d_h
    std::vector<double> w2;  // d_h
    double b2 = 0.0;

    std::size_t parameter_count() const { return d_h * (n_f + 2) + 1; }

    // seeded uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per layer
    static Stage1Model init(std::size_t n_f, std::size_t d_h, std::uint64_t seed);

    double score_row(std::span<const double> row) const;
};

// Adam accumulators, one slot per scalar parameter.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t step = 0;
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t n_params, double lr)
        : m(n_params, 0.0), v(n_params, 0.0), learning_rate(lr) {}

    void update(std::span<double> params, std::span<const double> grad);
};

std::vector<double> mlp_forward(const PairFeatureMatrix& x, const Stage1Model& model);

// Eq-style within-edge softmax cross-entropy over the train edges, summed
// (not averaged); multi-anchor edges contribute one term per anchor.
// Softmaxes are max-stabilized.
double stage1_loss(const std::vector<double>& scores, const Hypergraph& h,
                   const IncidenceIndex& inc, const std::vector<EdgeId>& train_edges);

// Analytic loss gradient w.r.t. all model parameters, laid out as
// [w1, b1, w2, b2]; returns the loss value.
double stage1_loss_gradient(const PairFeatureMatrix& x, const Stage1Model& model,
                            const Hypergraph& h, const std::vector<EdgeId>& train_edges,
                            std::vector<double>& grad_out);

struct Stage1Config {
    double learning_rate = 0.01;
    std::size_t epochs = 100;
    std::size_t hidden_dim = 64;
    std::uint64_t seed = 1;
};

struct Stage1Result {
    Stage1Model model;
    std::vector<double> scores;        // per incidence, all edges
    std::vector<double> epoch_losses;  // train loss before each update
};

// Full-batch training: 100 epochs of (forward over all incidences, loss over
// the train edges, analytic gradient, one Adam step). Scores are returned
// for every incidence, labeled or not.
Stage1Result train_stage1(const Hypergraph& h, const PairFeatureMatrix& x,
                          const SplitAssignment& splits, const Stage1Config& cfg);

// Model file: line 1 `n_f D_h`, then w1 row-major, b1, w2, b2, decimal with
// 17 significant digits.
void write_stage1_model(const Stage1Model& m, std::ostream& out);
Stage1Model read_stage1_model(const std::filesystem::path& path);

}  // namespace anchorradar

#endif
