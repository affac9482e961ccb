#include <algorithm>
#include <cmath>

#include "ritescene/classify.hpp"
#include "ritescene/errors.hpp"
#include "ritescene/rng.hpp"

namespace ritescene {

namespace {
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct ParamView {
    const double* w1;
    const double* b1;
    const double* w2;
    const double* b2;
};

ParamView view(const MlpModel& m, const double* params) {
    ParamView v;
    v.w1 = params;
    v.b1 = v.w1 + static_cast<std::size_t>(m.hidden) * m.input_dim;
    v.w2 = v.b1 + m.hidden;
    v.b2 = v.w2 + static_cast<std::size_t>(m.output_dim) * m.hidden;
    return v;
}

void forward(const MlpModel& m, const ParamView& p, const double* x,
             std::vector<double>& hidden, std::vector<double>& out) {
    hidden.resize(static_cast<std::size_t>(m.hidden));
    for (int j = 0; j < m.hidden; ++j) {
        double z = p.b1[j];
        const double* row = p.w1 + static_cast<std::size_t>(j) * m.input_dim;
        for (int i = 0; i < m.input_dim; ++i) z += row[i] * x[i];
        hidden[static_cast<std::size_t>(j)] = sigmoid(z);
    }
    out.resize(static_cast<std::size_t>(m.output_dim));
    for (int c = 0; c < m.output_dim; ++c) {
        double z = p.b2[c];
        const double* row = p.w2 + static_cast<std::size_t>(c) * m.hidden;
        for (int j = 0; j < m.hidden; ++j)
            z += row[j] * hidden[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(c)] = sigmoid(z);
    }
}
}  // namespace

MlpModel mlp_init(int input_dim, int hidden, int output_dim, std::uint64_t seed) {
    if (input_dim < 1 || hidden < 1 || output_dim < 1)
        throw InvariantError("mlp: layer sizes must be >= 1");
    MlpModel m;
    m.input_dim = input_dim;
    m.hidden = hidden;
    m.output_dim = output_dim;
    m.seed = seed;
    m.params.resize(m.param_count());
    Rng rng(seed);
    for (double& p : m.params) p = rng.uniform(-0.5, 0.5);
    return m;
}

double mlp_loss(const MlpModel& m, const std::vector<std::vector<double>>& x,
                const std::vector<std::vector<double>>& targets) {
    const ParamView p = view(m, m.params.data());
    std::vector<double> hidden, out;
    double loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        forward(m, p, x[i].data(), hidden, out);
        for (int c = 0; c < m.output_dim; ++c) {
            const double d = out[static_cast<std::size_t>(c)] - targets[i][static_cast<std::size_t>(c)];
            loss += d * d;
        }
    }
    return loss / (2.0 * static_cast<double>(x.size()));
}

std::vector<double> mlp_gradient(const MlpModel& m,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<std::vector<double>>& targets) {
    const ParamView p = view(m, m.params.data());
    std::vector<double> grad(m.param_count(), 0.0);
    ParamView g = view(m, grad.data());
    auto* gw1 = const_cast<double*>(g.w1);
    auto* gb1 = const_cast<double*>(g.b1);
    auto* gw2 = const_cast<double*>(g.w2);
    auto* gb2 = const_cast<double*>(g.b2);

    const double inv_n = 1.0 / static_cast<double>(x.size());
    std::vector<double> hidden, out, dz2, dh;
    for (std::size_t i = 0; i < x.size(); ++i) {
        forward(m, p, x[i].data(), hidden, out);
        dz2.assign(static_cast<std::size_t>(m.output_dim), 0.0);
        for (int c = 0; c < m.output_dim; ++c) {
            const double o = out[static_cast<std::size_t>(c)];
            dz2[static_cast<std::size_t>(c)] =
                (o - targets[i][static_cast<std::size_t>(c)]) * inv_n * o * (1.0 - o);
        }
        dh.assign(static_cast<std::size_t>(m.hidden), 0.0);
        for (int c = 0; c < m.output_dim; ++c) {
            const double d = dz2[static_cast<std::size_t>(c)];
            if (d == 0.0) continue;
            double* row = gw2 + static_cast<std::size_t>(c) * m.hidden;
            const double* w_row = p.w2 + static_cast<std::size_t>(c) * m.hidden;
            for (int j = 0; j < m.hidden; ++j) {
                row[j] += d * hidden[static_cast<std::size_t>(j)];
                dh[static_cast<std::size_t>(j)] += d * w_row[j];
            }
            gb2[c] += d;
        }
        for (int j = 0; j < m.hidden; ++j) {
            const double h = hidden[static_cast<std::size_t>(j)];
            const double d = dh[static_cast<std::size_t>(j)] * h * (1.0 - h);
            if (d == 0.0) continue;
            double* row = gw1 + static_cast<std::size_t>(j) * m.input_dim;
            for (int k = 0; k < m.input_dim; ++k) row[k] += d * x[i][static_cast<std::size_t>(k)];
            gb1[j] += d;
        }
    }
    return grad;
}

MlpModel mlp_train(const LabeledDataset& data, int hidden, double rate, int epochs,
                   std::uint64_t seed) {
    if (data.vocabulary.size() < 2)
        throw InvariantError("mlp_train: need at least 2 classes, got " +
                             std::to_string(data.vocabulary.size()));
    if (rate <= 0.0) throw InvariantError("mlp.rate must be > 0");
    if (epochs < 0) throw InvariantError("mlp.epochs must be >= 0");

    MlpModel m = mlp_init(data.feature_dim(), hidden,
                          static_cast<int>(data.vocabulary.size()), seed);
    m.rate = rate;
    m.epochs = epochs;
    m.vocabulary = data.vocabulary;

    std::vector<std::vector<double>> targets(data.labels.size());
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        targets[i].assign(data.vocabulary.size(), 0.0);
        const auto it = std::lower_bound(data.vocabulary.begin(),
                                         data.vocabulary.end(), data.labels[i]);
        targets[i][static_cast<std::size_t>(it - data.vocabulary.begin())] = 1.0;
    }

    m.loss_trace.reserve(static_cast<std::size_t>(epochs));
    for (int epoch = 0; epoch < epochs; ++epoch) {
        const std::vector<double> grad = mlp_gradient(m, data.features, targets);
        for (std::size_t i = 0; i < m.params.size(); ++i)
            m.params[i] -= rate * grad[i];
        m.loss_trace.push_back(mlp_loss(m, data.features, targets));
    }
    return m;
}

MlpPrediction mlp_predict(const MlpModel& m, std::span<const double> query) {
    if (static_cast<int>(query.size()) != m.input_dim)
        throw InvariantError("mlp_predict: query dimension " +
                             std::to_string(query.size()) + " != input dim " +
                             std::to_string(m.input_dim));
    const ParamView p = view(m, m.params.data());
    std::vector<double> hidden, out;
    forward(m, p, query.data(), hidden, out);
    std::size_t best = 0;
    for (std::size_t c = 1; c < out.size(); ++c)
        if (out[c] > out[best]) best = c;  // ties keep the first (lexicographic)
    return {m.vocabulary.at(best), out};
}

}  // namespace ritescene
