#include "ritescene/config.hpp"

#include <nlohmann/json.hpp>

#include "ritescene/errors.hpp"
#include "ritescene/ppm.hpp"

namespace ritescene {

namespace {
using nlohmann::json;

template <typename T>
T get_as(const json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw FormatError("config key \"" + key + "\": wrong value type");
    }
}

template <typename T>
ConfigKey make_key(std::string name, std::string description, T PipelineConfig::* field) {
    ConfigKey key;
    key.name = name;
    key.description = std::move(description);
    key.set = [field, name](PipelineConfig& c, const std::string& text) {
        json v = json::parse(text, nullptr, false);
        if (v.is_discarded())
            throw FormatError("config key \"" + name + "\": bad value \"" + text + "\"");
        c.*field = get_as<T>(v, name);
    };
    key.get = [field](const PipelineConfig& c) { return json(c.*field).dump(); };
    return key;
}

template <typename Outer, typename T>
ConfigKey make_nested_key(std::string name, std::string description,
                          Outer PipelineConfig::* outer, T Outer::* field) {
    ConfigKey key;
    key.name = name;
    key.description = std::move(description);
    key.set = [outer, field, name](PipelineConfig& c, const std::string& text) {
        json v = json::parse(text, nullptr, false);
        if (v.is_discarded())
            throw FormatError("config key \"" + name + "\": bad value \"" + text + "\"");
        (c.*outer).*field = get_as<T>(v, name);
    };
    key.get = [outer, field](const PipelineConfig& c) {
        return json((c.*outer).*field).dump();
    };
    return key;
}

std::vector<ConfigKey> build_keys() {
    std::vector<ConfigKey> keys;
    keys.push_back(make_nested_key("shot.k", "frame skip and keyframe stride",
                                   &PipelineConfig::shot, &ShotParams::k));
    keys.push_back(make_nested_key("shot.motion_threshold",
                                   "hue motion difference threshold",
                                   &PipelineConfig::shot, &ShotParams::motion_threshold));
    keys.push_back(make_nested_key("shot.block_threshold",
                                   "fraction of changed blocks that marks a cut",
                                   &PipelineConfig::shot, &ShotParams::block_threshold));
    keys.push_back(make_nested_key("shot.block_size", "comparison block side",
                                   &PipelineConfig::shot, &ShotParams::block_size));
    keys.push_back(make_nested_key("shot.block_change_level",
                                   "mean |RGB| difference that marks a block changed",
                                   &PipelineConfig::shot, &ShotParams::block_change_level));

    keys.push_back(make_key("bg.n", "background training frames", &PipelineConfig::bg_n));
    keys.push_back(make_key("bg.epsilon", "sigma floor", &PipelineConfig::bg_epsilon));
    keys.push_back(make_key("bg.rho", "background update rate", &PipelineConfig::bg_rho));
    keys.push_back(make_key("bg.window", "correlation window side (odd)",
                            &PipelineConfig::bg_window));
    keys.push_back(make_key("bg.threshold", "correlation distance threshold",
                            &PipelineConfig::bg_threshold));
    keys.push_back(make_key("bg.channel", "segmentation channel: h, s, or i",
                            &PipelineConfig::bg_channel));

    keys.push_back(make_nested_key("sift.octaves", "pyramid octaves",
                                   &PipelineConfig::sift, &PyramidParams::octaves));
    keys.push_back(make_nested_key("sift.scales", "scales per octave",
                                   &PipelineConfig::sift, &PyramidParams::scales));
    keys.push_back(make_nested_key("sift.sigma", "base blur sigma0",
                                   &PipelineConfig::sift, &PyramidParams::sigma));
    keys.push_back(make_nested_key("sift.contrast_threshold", "|DoG| contrast gate",
                                   &PipelineConfig::sift,
                                   &PyramidParams::contrast_threshold));
    keys.push_back(make_nested_key("sift.edge_ratio", "principal curvature ratio bound",
                                   &PipelineConfig::sift, &PyramidParams::edge_ratio));

    keys.push_back(make_key("dict.m", "dictionary atoms", &PipelineConfig::dict_m));
    keys.push_back(make_key("dict.lambda", "sparsity weight", &PipelineConfig::dict_lambda));
    keys.push_back(make_key("dict.iterations", "dictionary learning alternations",
                            &PipelineConfig::dict_iterations));
    keys.push_back(make_key("dict.max_descriptors",
                            "seeded cap on descriptors used for learning",
                            &PipelineConfig::dict_max_descriptors));

    keys.push_back(make_key("classifier.kind", "knn, ann, or svm",
                            &PipelineConfig::classifier_kind));
    keys.push_back(make_key("knn.k", "neighbor count", &PipelineConfig::knn_k));
    keys.push_back(make_key("mlp.hidden", "hidden layer width", &PipelineConfig::mlp_hidden));
    keys.push_back(make_key("mlp.rate", "learning rate", &PipelineConfig::mlp_rate));
    keys.push_back(make_key("mlp.epochs", "training epochs", &PipelineConfig::mlp_epochs));
    keys.push_back(make_key("svm.kernel", "rbf, linear, or poly", &PipelineConfig::svm_kernel));
    keys.push_back(make_key("svm.c", "regularization C", &PipelineConfig::svm_c));
    keys.push_back(make_key("svm.gamma", "RBF gamma (0 = 1/feature_dim)",
                            &PipelineConfig::svm_gamma));
    keys.push_back(make_key("svm.degree", "polynomial degree", &PipelineConfig::svm_degree));
    keys.push_back(make_key("svm.tol", "KKT tolerance", &PipelineConfig::svm_tol));

    keys.push_back(make_key("io.pattern", "frame filename glob", &PipelineConfig::io_pattern));
    keys.push_back(make_key("io.fps", "frame rate", &PipelineConfig::io_fps));
    keys.push_back(make_key("seed", "master random seed", &PipelineConfig::seed));
    keys.push_back(make_key("workers", "worker pool size (0 = cores)",
                            &PipelineConfig::workers));
    return keys;
}
}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = build_keys();
    return keys;
}

void PipelineConfig::validate() const {
    shot.validate();
    sift.validate();
    if (bg_n < 2) throw InvariantError("bg.n must be >= 2");
    if (bg_epsilon <= 0.0) throw InvariantError("bg.epsilon must be > 0");
    if (bg_rho < 0.0 || bg_rho > 1.0) throw InvariantError("bg.rho must be in [0,1]");
    if (bg_window < 1 || bg_window % 2 == 0)
        throw InvariantError("bg.window must be odd and >= 1");
    if (bg_threshold < 0.0 || bg_threshold > 2.0)
        throw InvariantError("bg.threshold must be in [0,2]");
    if (bg_channel != "h" && bg_channel != "s" && bg_channel != "i")
        throw InvariantError("bg.channel must be h, s, or i");
    if (dict_m < 1) throw InvariantError("dict.m must be >= 1");
    if (dict_lambda < 0.0) throw InvariantError("dict.lambda must be >= 0");
    if (dict_iterations < 0) throw InvariantError("dict.iterations must be >= 0");
    if (dict_max_descriptors < 1)
        throw InvariantError("dict.max_descriptors must be >= 1");
    if (classifier_kind != "knn" && classifier_kind != "ann" && classifier_kind != "svm")
        throw InvariantError("classifier.kind must be knn, ann, or svm");
    if (knn_k < 1) throw InvariantError("knn.k must be >= 1");
    if (mlp_hidden < 1) throw InvariantError("mlp.hidden must be >= 1");
    if (mlp_rate <= 0.0) throw InvariantError("mlp.rate must be > 0");
    if (mlp_epochs < 0) throw InvariantError("mlp.epochs must be >= 0");
    if (svm_kernel != "rbf" && svm_kernel != "linear" && svm_kernel != "poly")
        throw InvariantError("svm.kernel must be rbf, linear, or poly");
    if (svm_c <= 0.0) throw InvariantError("svm.c must be > 0");
    if (svm_gamma < 0.0) throw InvariantError("svm.gamma must be >= 0");
    if (svm_degree < 1) throw InvariantError("svm.degree must be >= 1");
    if (svm_tol <= 0.0) throw InvariantError("svm.tol must be > 0");
    if (io_fps <= 0.0) throw InvariantError("io.fps must be > 0");
    if (workers < 0) throw InvariantError("workers must be >= 0");
}

SegmentChannel PipelineConfig::segment_channel() const {
    if (bg_channel == "h") return SegmentChannel::H;
    if (bg_channel == "s") return SegmentChannel::S;
    return SegmentChannel::I;
}

ClassifierConfig PipelineConfig::classifier_config() const {
    ClassifierConfig cc;
    cc.kind = classifier_kind;
    cc.knn_k = knn_k;
    cc.mlp_hidden = mlp_hidden;
    cc.mlp_rate = mlp_rate;
    cc.mlp_epochs = mlp_epochs;
    cc.svm_c = svm_c;
    cc.svm_tol = svm_tol;
    cc.seed = seed;
    if (svm_kernel == "linear") {
        cc.svm_kernel.kind = KernelKind::Linear;
    } else if (svm_kernel == "poly") {
        cc.svm_kernel.kind = KernelKind::Polynomial;
        cc.svm_kernel.degree = svm_degree;
    } else {
        cc.svm_kernel.kind = KernelKind::Rbf;
        cc.svm_kernel.gamma = svm_gamma;
    }
    cc.svm_gamma_auto = svm_gamma <= 0.0;
    if (cc.svm_gamma_auto) cc.svm_kernel.gamma = 1.0;  // replaced at train time
    return cc;
}

void apply_config_key(PipelineConfig& config, const std::string& key,
                      const std::string& json_value) {
    for (const auto& entry : config_keys()) {
        if (entry.name == key) {
            entry.set(config, json_value);
            return;
        }
    }
    throw FormatError("unknown config key \"" + key + "\"");
}

PipelineConfig parse_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("config: top level must be an object");
    PipelineConfig config;
    for (const auto& [key, value] : doc.items())
        apply_config_key(config, key, value.dump());
    return config;
}

PipelineConfig load_config_file(const std::string& path) {
    return parse_config(read_file_bytes(path));
}

std::string config_to_json(const PipelineConfig& config) {
    nlohmann::json doc;
    for (const auto& entry : config_keys())
        doc[entry.name] = nlohmann::json::parse(entry.get(config));
    return doc.dump(2) + "\n";
}

}  // namespace ritescene
