#ifndef RITESCENE_CLASSIFY_HPP
#define RITESCENE_CLASSIFY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ritescene {

struct LabeledDataset {
    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    std::vector<std::string> vocabulary;  // sorted, unique

    // Builds the vocabulary from the labels and checks invariants:
    // finite features of uniform dimension, one feature per label.
    void finalize();
    int feature_dim() const;
};

double euclidean_distance(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// KNN

struct KnnModel {
    int k = 5;
    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    std::vector<std::string> vocabulary;
};

KnnModel knn_train(const LabeledDataset& data, int k);

struct KnnPrediction {
    std::string label;
    double vote_fraction;
};

// Majority vote among the K nearest; ties break by smaller summed
// distance, then lexicographic label.
KnnPrediction knn_predict(const KnnModel& model, std::span<const double> query);

// ---------------------------------------------------------------------------
// MLP (the ANN classifier): one sigmoid hidden layer, sigmoid outputs,
// one-hot targets, mean-squared-error loss, full-batch gradient descent.

struct MlpModel {
    int input_dim = 0;
    int hidden = 0;
    int output_dim = 0;
    double rate = 0.1;
    int epochs = 0;
    std::uint64_t seed = 0;
    // Layout: w1 (hidden x input), b1 (hidden), w2 (output x hidden), b2 (output).
    std::vector<double> params;
    std::vector<double> loss_trace;
    std::vector<std::string> vocabulary;

    std::size_t param_count() const {
        return static_cast<std::size_t>(hidden) * input_dim + hidden +
               static_cast<std::size_t>(output_dim) * hidden + output_dim;
    }
};

MlpModel mlp_init(int input_dim, int hidden, int output_dim, std::uint64_t seed);
MlpModel mlp_train(const LabeledDataset& data, int hidden, double rate, int epochs,
                   std::uint64_t seed);

struct MlpPrediction {
    std::string label;
    std::vector<double> scores;  // sigmoid outputs, vocabulary order
};

MlpPrediction mlp_predict(const MlpModel& model, std::span<const double> query);

// Loss and analytic gradient over a dataset, exposed so the
// finite-difference check can probe arbitrary parameter points.
double mlp_loss(const MlpModel& model, const std::vector<std::vector<double>>& x,
                const std::vector<std::vector<double>>& targets);
std::vector<double> mlp_gradient(const MlpModel& model,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<std::vector<double>>& targets);

// ---------------------------------------------------------------------------
// SVM via SMO

enum class KernelKind { Linear, Rbf, Polynomial, Custom };

struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    double gamma = 1.0;  // RBF; <= 0 rejected at config time
    int degree = 3;      // polynomial; < 1 rejected at config time
    std::function<double(std::span<const double>, std::span<const double>)> custom;

    void validate() const;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

struct SvmBinaryModel {
    KernelSpec kernel;
    double c = 10.0;
    double bias = 0.0;
    // Support vectors: exactly the training points with alpha > 0.
    std::vector<std::vector<double>> sv_features;
    std::vector<double> sv_alpha;
    std::vector<double> sv_y;
    std::vector<double> dual_trace;  // dual objective after each accepted step
    bool gram_psd_warning = false;   // custom kernel with a negative Gram eigenvalue
};

struct SvmTrainDiagnostics {
    std::vector<double> alphas;  // every training point
    double max_kkt_violation = 0.0;
    double alpha_y_sum = 0.0;
    long long accepted_steps = 0;
};

SvmBinaryModel svm_train_binary(const std::vector<std::vector<double>>& features,
                                const std::vector<double>& y, const KernelSpec& kernel,
                                double c, double tol, std::uint64_t seed,
                                SvmTrainDiagnostics* diagnostics = nullptr);

// f(x) = sum_i alpha_i y_i K(x_i, x) + b.
double svm_predict_binary(const SvmBinaryModel& model, std::span<const double> query);

// Largest KKT violation over a training set given dual variables;
// 0 means every condition holds exactly.
double svm_max_kkt_violation(const std::vector<std::vector<double>>& features,
                             const std::vector<double>& y,
                             const std::vector<double>& alphas, double bias,
                             const KernelSpec& kernel, double c);

// ---------------------------------------------------------------------------
// Multiclass wrapper

struct ClassifierConfig {
    std::string kind = "svm";  // knn | ann | svm
    int knn_k = 5;
    int mlp_hidden = 64;
    double mlp_rate = 0.1;
    int mlp_epochs = 500;
    KernelSpec svm_kernel;
    double svm_c = 10.0;
    double svm_tol = 1e-3;
    bool svm_gamma_auto = true;  // gamma = 1/feature_dim when set
    std::uint64_t seed = 0;
};

struct TrainedModel {
    std::string kind;
    std::vector<std::string> vocabulary;
    ClassifierConfig config;
    std::optional<KnnModel> knn;
    std::optional<MlpModel> mlp;
    std::vector<SvmBinaryModel> svm_components;  // one-vs-rest, vocabulary order
};

struct Prediction {
    std::string label;
    double confidence;
    std::vector<double> scores;  // vocabulary order
};

// KNN and the MLP are natively multiclass; the SVM wraps one binary
// one-vs-rest model per class and predicts the argmax signed score.
TrainedModel multiclass_train(const LabeledDataset& data, const ClassifierConfig& config);
Prediction multiclass_predict(const TrainedModel& model, std::span<const double> query);

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

}  // namespace ritescene

#endif
