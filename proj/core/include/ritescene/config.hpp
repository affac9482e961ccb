#ifndef RITESCENE_CONFIG_HPP
#define RITESCENE_CONFIG_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ritescene/bgfg.hpp"
#include "ritescene/classify.hpp"
#include "ritescene/shotseg.hpp"
#include "ritescene/sift.hpp"

namespace ritescene {

// Every tunable in the toolkit, addressed by flat dotted keys
// ("shot.k", "svm.c"). Precedence: CLI flag > config file > default.
struct PipelineConfig {
    ShotParams shot;

    int bg_n = 30;
    double bg_epsilon = 1e-3;
    double bg_rho = 0.05;
    int bg_window = 5;
    double bg_threshold = 0.2;
    std::string bg_channel = "i";  // h | s | i

    PyramidParams sift;

    int dict_m = 256;
    double dict_lambda = 0.15;
    int dict_iterations = 30;
    int dict_max_descriptors = 20000;

    std::string classifier_kind = "svm";  // knn | ann | svm
    int knn_k = 5;
    int mlp_hidden = 64;
    double mlp_rate = 0.1;
    int mlp_epochs = 500;
    std::string svm_kernel = "rbf";  // rbf | linear | poly
    double svm_c = 10.0;
    double svm_gamma = 0.0;  // 0 = automatic 1/feature_dim
    int svm_degree = 3;
    double svm_tol = 1e-3;

    std::string io_pattern = "frame_*.ppm";
    double io_fps = 30.0;

    std::uint64_t seed = 1;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const;
    SegmentChannel segment_channel() const;
    ClassifierConfig classifier_config() const;
};

struct ConfigKey {
    std::string name;
    std::string description;
    std::function<void(PipelineConfig&, const std::string& json_value)> set;
    std::function<std::string(const PipelineConfig&)> get;  // JSON-encoded value
};

const std::vector<ConfigKey>& config_keys();

// Strict flat-object parse: unknown keys are rejected.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config_file(const std::string& path);
void apply_config_key(PipelineConfig& config, const std::string& key,
                      const std::string& json_value);
std::string config_to_json(const PipelineConfig& config);

}  // namespace ritescene

#endif
