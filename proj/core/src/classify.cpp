#include <algorithm>
#include <nlohmann/json.hpp>

#include "ritescene/base64.hpp"
#include "ritescene/classify.hpp"
#include "ritescene/errors.hpp"

namespace ritescene {

namespace {
std::string kernel_kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Polynomial: return "poly";
        case KernelKind::Custom: return "custom";
    }
    return "?";
}

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "linear") return KernelKind::Linear;
    if (name == "rbf") return KernelKind::Rbf;
    if (name == "poly") return KernelKind::Polynomial;
    throw FormatError("unknown kernel kind \"" + name + "\"");
}

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return flat;
}

std::vector<std::vector<double>> unflatten(const std::vector<double>& flat,
                                           std::size_t dim) {
    if (dim == 0 || flat.size() % dim != 0)
        throw FormatError("model: flat array size " + std::to_string(flat.size()) +
                          " not divisible by dim " + std::to_string(dim));
    std::vector<std::vector<double>> rows(flat.size() / dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * dim),
                       flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
    return rows;
}
}  // namespace

TrainedModel multiclass_train(const LabeledDataset& data, const ClassifierConfig& config) {
    if (data.vocabulary.size() < 2)
        throw InvariantError("multiclass_train: need at least 2 classes");

    TrainedModel model;
    model.kind = config.kind;
    model.vocabulary = data.vocabulary;
    model.config = config;

    if (config.kind == "knn") {
        model.knn = knn_train(data, config.knn_k);
    } else if (config.kind == "ann") {
        model.mlp = mlp_train(data, config.mlp_hidden, config.mlp_rate,
                              config.mlp_epochs, config.seed);
    } else if (config.kind == "svm") {
        KernelSpec kernel = config.svm_kernel;
        if (kernel.kind == KernelKind::Rbf && config.svm_gamma_auto)
            kernel.gamma = 1.0 / static_cast<double>(data.feature_dim());
        for (std::size_t c = 0; c < data.vocabulary.size(); ++c) {
            std::vector<double> y(data.labels.size());
            for (std::size_t i = 0; i < data.labels.size(); ++i)
                y[i] = data.labels[i] == data.vocabulary[c] ? 1.0 : -1.0;
            model.svm_components.push_back(
                svm_train_binary(data.features, y, kernel, config.svm_c,
                                 config.svm_tol, config.seed + c));
        }
    } else {
        throw InvariantError("classifier.kind must be knn, ann, or svm, got \"" +
                             config.kind + "\"");
    }
    return model;
}

Prediction multiclass_predict(const TrainedModel& model, std::span<const double> query) {
    Prediction pred;
    if (model.kind == "knn") {
        const KnnPrediction kp = knn_predict(*model.knn, query);
        pred.label = kp.label;
        pred.confidence = kp.vote_fraction;
        pred.scores.assign(model.vocabulary.size(), 0.0);
        const auto it = std::lower_bound(model.vocabulary.begin(),
                                         model.vocabulary.end(), kp.label);
        pred.scores[static_cast<std::size_t>(it - model.vocabulary.begin())] =
            kp.vote_fraction;
        return pred;
    }
    if (model.kind == "ann") {
        const MlpPrediction mp = mlp_predict(*model.mlp, query);
        pred.label = mp.label;
        pred.scores = mp.scores;
        pred.confidence = *std::max_element(mp.scores.begin(), mp.scores.end());
        return pred;
    }
    if (model.kind == "svm") {
        pred.scores.reserve(model.svm_components.size());
        for (const auto& comp : model.svm_components)
            pred.scores.push_back(svm_predict_binary(comp, query));
        std::size_t best = 0;
        for (std::size_t c = 1; c < pred.scores.size(); ++c)
            if (pred.scores[c] > pred.scores[best]) best = c;  // ties: first label
        pred.label = model.vocabulary.at(best);
        pred.confidence = pred.scores[best];
        return pred;
    }
    throw InvariantError("multiclass_predict: unknown model kind \"" + model.kind +
                         "\"");
}

std::string model_to_json(const TrainedModel& model) {
    nlohmann::json doc;
    doc["kind"] = model.kind;
    doc["vocabulary"] = model.vocabulary;

    if (model.kind == "knn") {
        const KnnModel& m = *model.knn;
        std::vector<int> label_ids(m.labels.size());
        for (std::size_t i = 0; i < m.labels.size(); ++i) {
            const auto it = std::lower_bound(model.vocabulary.begin(),
                                             model.vocabulary.end(), m.labels[i]);
            label_ids[i] = static_cast<int>(it - model.vocabulary.begin());
        }
        doc["knn"] = {
            {"k", m.k},
            {"dim", m.features.empty() ? 0 : static_cast<int>(m.features[0].size())},
            {"labels", label_ids},
            {"features", doubles_to_base64(flatten(m.features))},
        };
    } else if (model.kind == "ann") {
        const MlpModel& m = *model.mlp;
        doc["ann"] = {
            {"input_dim", m.input_dim},   {"hidden", m.hidden},
            {"output_dim", m.output_dim}, {"rate", m.rate},
            {"epochs", m.epochs},         {"seed", m.seed},
            {"params", doubles_to_base64(m.params)},
            {"loss_trace", m.loss_trace},
        };
    } else if (model.kind == "svm") {
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& comp : model.svm_components) {
            if (comp.kernel.kind == KernelKind::Custom)
                throw InvariantError("custom kernels cannot be serialized");
            comps.push_back({
                {"kernel", kernel_kind_name(comp.kernel.kind)},
                {"gamma", comp.kernel.gamma},
                {"degree", comp.kernel.degree},
                {"c", comp.c},
                {"bias", comp.bias},
                {"dim", comp.sv_features.empty()
                            ? 0
                            : static_cast<int>(comp.sv_features[0].size())},
                {"alpha", doubles_to_base64(comp.sv_alpha)},
                {"y", doubles_to_base64(comp.sv_y)},
                {"features", doubles_to_base64(flatten(comp.sv_features))},
                {"psd_warning", comp.gram_psd_warning},
            });
        }
        doc["svm"] = std::move(comps);
    } else {
        throw InvariantError("model_to_json: unknown kind \"" + model.kind + "\"");
    }
    return doc.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("model: ") + e.what());
    }
    try {
        TrainedModel model;
        model.kind = doc.at("kind").get<std::string>();
        model.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
        model.config.kind = model.kind;

        if (model.kind == "knn") {
            const auto& j = doc.at("knn");
            KnnModel m;
            m.k = j.at("k").get<int>();
            m.vocabulary = model.vocabulary;
            const auto dim = j.at("dim").get<std::size_t>();
            m.features = unflatten(base64_to_doubles(j.at("features").get<std::string>()), dim);
            for (int id : j.at("labels").get<std::vector<int>>())
                m.labels.push_back(model.vocabulary.at(static_cast<std::size_t>(id)));
            if (m.labels.size() != m.features.size())
                throw FormatError("model: knn label/feature count mismatch");
            model.config.knn_k = m.k;
            model.knn = std::move(m);
        } else if (model.kind == "ann") {
            const auto& j = doc.at("ann");
            MlpModel m;
            m.input_dim = j.at("input_dim").get<int>();
            m.hidden = j.at("hidden").get<int>();
            m.output_dim = j.at("output_dim").get<int>();
            m.rate = j.at("rate").get<double>();
            m.epochs = j.at("epochs").get<int>();
            m.seed = j.at("seed").get<std::uint64_t>();
            m.params = base64_to_doubles(j.at("params").get<std::string>());
            m.loss_trace = j.at("loss_trace").get<std::vector<double>>();
            m.vocabulary = model.vocabulary;
            if (m.params.size() != m.param_count())
                throw FormatError("model: ann parameter count mismatch");
            model.config.mlp_hidden = m.hidden;
            model.config.mlp_rate = m.rate;
            model.config.mlp_epochs = m.epochs;
            model.mlp = std::move(m);
        } else if (model.kind == "svm") {
            for (const auto& j : doc.at("svm")) {
                SvmBinaryModel comp;
                comp.kernel.kind = kernel_kind_from_name(j.at("kernel").get<std::string>());
                comp.kernel.gamma = j.at("gamma").get<double>();
                comp.kernel.degree = j.at("degree").get<int>();
                comp.c = j.at("c").get<double>();
                comp.bias = j.at("bias").get<double>();
                comp.gram_psd_warning = j.at("psd_warning").get<bool>();
                const auto dim = j.at("dim").get<std::size_t>();
                comp.sv_alpha = base64_to_doubles(j.at("alpha").get<std::string>());
                comp.sv_y = base64_to_doubles(j.at("y").get<std::string>());
                comp.sv_features =
                    unflatten(base64_to_doubles(j.at("features").get<std::string>()), dim);
                if (comp.sv_alpha.size() != comp.sv_features.size() ||
                    comp.sv_y.size() != comp.sv_features.size())
                    throw FormatError("model: svm support vector count mismatch");
                model.svm_components.push_back(std::move(comp));
            }
            if (model.svm_components.size() != model.vocabulary.size())
                throw FormatError("model: svm component count != vocabulary size");
        } else {
            throw FormatError("model: unknown kind \"" + model.kind + "\"");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model: ") + e.what());
    }
}

}  // namespace ritescene
