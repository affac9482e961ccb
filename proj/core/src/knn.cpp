#include <algorithm>
#include <cmath>
#include <map>

#include "ritescene/classify.hpp"
#include "ritescene/errors.hpp"

namespace ritescene {

void LabeledDataset::finalize() {
    if (features.size() != labels.size())
        throw InvariantError("dataset: " + std::to_string(features.size()) +
                             " features vs " + std::to_string(labels.size()) +
                             " labels");
    if (features.empty()) throw InvariantError("dataset: empty");
    const std::size_t dim = features.front().size();
    for (const auto& f : features) {
        if (f.size() != dim)
            throw InvariantError("dataset: mixed feature dimensions");
        for (double v : f)
            if (!std::isfinite(v))
                throw InvariantError("dataset: non-finite feature value");
    }
    vocabulary = labels;
    std::sort(vocabulary.begin(), vocabulary.end());
    vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()),
                     vocabulary.end());
}

int LabeledDataset::feature_dim() const {
    return features.empty() ? 0 : static_cast<int>(features.front().size());
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw InvariantError("euclidean_distance: dimension mismatch, " +
                             std::to_string(x.size()) + " vs " +
                             std::to_string(y.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

KnnModel knn_train(const LabeledDataset& data, int k) {
    if (k < 1) throw InvariantError("knn.k must be >= 1");
    if (static_cast<std::size_t>(k) > data.features.size())
        throw InvariantError("knn.k = " + std::to_string(k) +
                             " exceeds training size " +
                             std::to_string(data.features.size()));
    KnnModel model;
    model.k = k;
    model.features = data.features;
    model.labels = data.labels;
    model.vocabulary = data.vocabulary;
    return model;
}

KnnPrediction knn_predict(const KnnModel& model, std::span<const double> query) {
    const std::size_t n = model.features.size();
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = {euclidean_distance(model.features[i], query), i};
    const std::size_t k = static_cast<std::size_t>(model.k);
    std::partial_sort(order.begin(), order.begin() + k, order.end());

    // label -> (votes, summed distance)
    std::map<std::string, std::pair<int, double>> tally;
    for (std::size_t i = 0; i < k; ++i) {
        auto& t = tally[model.labels[order[i].second]];
        t.first += 1;
        t.second += order[i].first;
    }
    const std::string* best = nullptr;
    int best_votes = -1;
    double best_dist = 0.0;
    for (const auto& [label, t] : tally) {
        // std::map iterates labels lexicographically, so on full ties the
        // first seen (smallest) label wins.
        if (t.first > best_votes ||
            (t.first == best_votes && t.second < best_dist)) {
            best = &label;
            best_votes = t.first;
            best_dist = t.second;
        }
    }
    return {*best, static_cast<double>(best_votes) / static_cast<double>(k)};
}

}  // namespace ritescene
