#include "anchorradar/stage1.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "anchorradar/rng.hpp"

namespace anchorradar {

Stage1Model Stage1Model::init(std::size_t n_f, std::size_t d_h, std::uint64_t seed) {
    Stage1Model m;
    m.n_f = n_f;
    m.d_h = d_h;
    m.w1.resize(n_f * d_h);
    m.b1.resize(d_h);
    m.w2.resize(d_h);

    Rng rng(seed);
    const double bound1 = 1.0 / std::sqrt(static_cast<double>(n_f));
    for (double& w : m.w1) w = rng.next_uniform(-bound1, bound1);
    for (double& b : m.b1) b = rng.next_uniform(-bound1, bound1);
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(d_h));
    for (double& w : m.w2) w = rng.next_uniform(-bound2, bound2);
    m.b2 = rng.next_uniform(-bound2, bound2);
    return m;
}

namespace {

// hidden pre-activations with the unit-stride axis innermost
void forward_hidden(const Stage1Model& m, std::span<const double> row, std::vector<double>& hidden) {
    hidden.assign(m.d_h, 0.0);
    for (std::size_t i = 0; i < m.n_f; ++i) {
        const double xi = row[i];
        const double* wrow = m.w1.data() + i * m.d_h;
        for (std::size_t j = 0; j < m.d_h; ++j) hidden[j] += wrow[j] * xi;
    }
    for (std::size_t j = 0; j < m.d_h; ++j) hidden[j] += m.b1[j];
}

double forward_row(const Stage1Model& m, std::span<const double> row, std::vector<double>& hidden) {
    forward_hidden(m, row, hidden);
    double s = m.b2;
    for (std::size_t j = 0; j < m.d_h; ++j)
        if (hidden[j] > 0.0) s += m.w2[j] * hidden[j];
    return s;
}

}  // namespace

double Stage1Model::score_row(std::span<const double> row) const {
    if (row.size() != n_f) throw std::runtime_error("feature row width != n_f");
    std::vector<double> hidden;
    return forward_row(*this, row, hidden);
}

void AdamState::update(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m.size() || grad.size() != m.size())
        throw std::runtime_error("adam: parameter/gradient size mismatch");
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        params[i] -= learning_rate * mhat / (std::sqrt(vhat) + epsilon);
    }
}

std::vector<double> mlp_forward(const PairFeatureMatrix& x, const Stage1Model& model) {
    if (x.columns != model.n_f) throw std::runtime_error("feature width != model n_f");
    std::vector<double> scores(x.rows());
    std::vector<double> hidden;
    for (std::size_t r = 0; r < x.rows(); ++r) scores[r] = forward_row(model, x.row(r), hidden);
    return scores;
}

namespace {

// per-edge max-stabilized softmax over rows [begin, end)
void edge_softmax(const std::vector<double>& scores, std::size_t begin, std::size_t end,
                  std::vector<double>& probs) {
    double mx = scores[begin];
    for (std::size_t r = begin + 1; r < end; ++r) mx = std::max(mx, scores[r]);
    double denom = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
        probs[r - begin] = std::exp(scores[r] - mx);
        denom += probs[r - begin];
    }
    for (std::size_t r = begin; r < end; ++r) probs[r - begin] /= denom;
}

}  // namespace

double stage1_loss(const std::vector<double>& scores, const Hypergraph& h,
                   const IncidenceIndex& inc, const std::vector<EdgeId>& train_edges) {
    if (train_edges.empty()) throw std::runtime_error("stage1 loss: empty train set");
    double loss = 0.0;
    std::vector<double> probs;
    for (EdgeId e : train_edges) {
        const std::size_t begin = inc.edge_row_begin[e], end = inc.edge_row_begin[e + 1];
        probs.resize(end - begin);
        edge_softmax(scores, begin, end, probs);
        for (NodeId a : h.anchors[e]) {
            const std::size_t r = inc.row_of(h, e, a);
            loss -= std::log(probs[r - begin]);
        }
    }
    return loss;
}

double stage1_loss_gradient(const PairFeatureMatrix& x, const Stage1Model& model,
                            const Hypergraph& h, const std::vector<EdgeId>& train_edges,
                            std::vector<double>& grad_out) {
    const std::size_t n_f = model.n_f, d_h = model.d_h;
    const IncidenceIndex& inc = x.incidence;

    // pass 1: scores for the train rows
    std::vector<double> scores(x.rows(), 0.0);
    std::vector<double> hidden(d_h);
    for (EdgeId e : train_edges) {
        for (std::size_t r = inc.edge_row_begin[e]; r < inc.edge_row_begin[e + 1]; ++r)
            scores[r] = forward_row(model, x.row(r), hidden);
    }

    // dL/dscore per train row
    double loss = 0.0;
    std::vector<double> dscore(x.rows(), 0.0);
    std::vector<double> probs;
    for (EdgeId e : train_edges) {
        const std::size_t begin = inc.edge_row_begin[e], end = inc.edge_row_begin[e + 1];
        probs.resize(end - begin);
        edge_softmax(scores, begin, end, probs);
        const double n_anchor = static_cast<double>(h.anchors[e].size());
        for (std::size_t r = begin; r < end; ++r) dscore[r] += n_anchor * probs[r - begin];
        for (NodeId a : h.anchors[e]) {
            const std::size_t r = inc.row_of(h, e, a);
            loss -= std::log(probs[r - begin]);
            dscore[r] -= 1.0;
        }
    }

    // pass 2: recompute hidden activations per row, accumulate parameter grads
    grad_out.assign(model.parameter_count(), 0.0);
    double* gw1 = grad_out.data();
    double* gb1 = gw1 + n_f * d_h;
    double* gw2 = gb1 + d_h;
    double* gb2 = gw2 + d_h;

    std::vector<double> ghid(d_h);
    for (EdgeId e : train_edges) {
        for (std::size_t r = inc.edge_row_begin[e]; r < inc.edge_row_begin[e + 1]; ++r) {
            const double g = dscore[r];
            if (g == 0.0) continue;
            const auto row = x.row(r);
            forward_hidden(model, row, hidden);
            *gb2 += g;
            for (std::size_t j = 0; j < d_h; ++j) {
                if (hidden[j] > 0.0) {
                    gw2[j] += g * hidden[j];
                    const double gh = g * model.w2[j];  // relu-gated
                    gb1[j] += gh;
                    ghid[j] = gh;
                } else {
                    ghid[j] = 0.0;
                }
            }
            for (std::size_t i = 0; i < n_f; ++i) {
                const double xi = row[i];
                double* grow = gw1 + i * d_h;
                for (std::size_t j = 0; j < d_h; ++j) grow[j] += ghid[j] * xi;
            }
        }
    }
    return loss;
}

Stage1Result train_stage1(const Hypergraph& h, const PairFeatureMatrix& x,
                          const SplitAssignment& splits, const Stage1Config& cfg) {
    const std::vector<EdgeId> train_edges = splits.edges_in(Split::train);
    if (train_edges.empty()) throw std::runtime_error("stage1: train split is empty");

    Stage1Result out;
    out.model = Stage1Model::init(x.columns, cfg.hidden_dim, cfg.seed);

    const std::size_t n_params = out.model.parameter_count();
    AdamState adam(n_params, cfg.learning_rate);
    std::vector<double> grad(n_params, 0.0);

    // flat view over [w1 | b1 | w2 | b2] for the optimizer
    std::vector<double> params(n_params);
    auto pack = [&] {
        std::copy(out.model.w1.begin(), out.model.w1.end(), params.begin());
        std::copy(out.model.b1.begin(), out.model.b1.end(), params.begin() + out.model.w1.size());
        std::copy(out.model.w2.begin(), out.model.w2.end(),
                  params.begin() + out.model.w1.size() + out.model.b1.size());
        params.back() = out.model.b2;
    };
    auto unpack = [&] {
        std::copy(params.begin(), params.begin() + out.model.w1.size(), out.model.w1.begin());
        std::copy(params.begin() + out.model.w1.size(),
                  params.begin() + out.model.w1.size() + out.model.b1.size(), out.model.b1.begin());
        std::copy(params.begin() + out.model.w1.size() + out.model.b1.size(), params.end() - 1,
                  out.model.w2.begin());
        out.model.b2 = params.back();
    };

    out.epoch_losses.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double loss = stage1_loss_gradient(x, out.model, h, train_edges, grad);
        if (!std::isfinite(loss))
            throw std::runtime_error("stage1: non-finite loss at epoch " + std::to_string(epoch));
        out.epoch_losses.push_back(loss);
        pack();
        adam.update(params, grad);
        unpack();
    }

    out.scores = mlp_forward(x, out.model);
    return out;
}

void write_stage1_model(const Stage1Model& m, std::ostream& out) {
    out << m.n_f << ' ' << m.d_h << '\n';
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < m.n_f; ++i) {
        for (std::size_t j = 0; j < m.d_h; ++j) {
            if (j) out << ' ';
            emit(m.w1[i * m.d_h + j]);
        }
        out << '\n';
    }
    for (std::size_t j = 0; j < m.d_h; ++j) {
        if (j) out << ' ';
        emit(m.b1[j]);
    }
    out << '\n';
    for (std::size_t j = 0; j < m.d_h; ++j) {
        if (j) out << ' ';
        emit(m.w2[j]);
    }
    out << '\n';
    emit(m.b2);
    out << '\n';
}

Stage1Model read_stage1_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path.string());
    Stage1Model m;
    if (!(in >> m.n_f >> m.d_h)) throw std::runtime_error("bad model header: " + path.string());
    m.w1.resize(m.n_f * m.d_h);
    m.b1.resize(m.d_h);
    m.w2.resize(m.d_h);
    for (double& v : m.w1)
        if (!(in >> v)) throw std::runtime_error("truncated model file: " + path.string());
    for (double& v : m.b1)
        if (!(in >> v)) throw std::runtime_error("truncated model file: " + path.string());
    for (double& v : m.w2)
        if (!(in >> v)) throw std::runtime_error("truncated model file: " + path.string());
    if (!(in >> m.b2)) throw std::runtime_error("truncated model file: " + path.string());
    return m;
}

}  // namespace anchorradar
