#ifndef RITESCENE_EVALREPORT_HPP
#define RITESCENE_EVALREPORT_HPP

#include <optional>
#include <string>
#include <vector>

namespace ritescene {

struct ClassCounts {
    long long total = 0;      // correct + miss
    long long correct = 0;    // t_p
    long long false_pos = 0;  // f_p
    long long miss = 0;       // f_n
};

// 100 * t_p / (t_p + f_n); empty when the denominator is zero
// (rendered as "n/a" and excluded from macro averages).
std::optional<double> recall_percent(const ClassCounts& counts);

// 100 * t_p / (t_p + f_p).
std::optional<double> precision_percent(const ClassCounts& counts);

// Per-class counts in vocabulary order. Throws on length mismatch or a
// label outside the vocabulary.
std::vector<ClassCounts> confusion_counts(const std::vector<std::string>& predictions,
                                          const std::vector<std::string>& truths,
                                          const std::vector<std::string>& vocabulary);

// Unweighted mean of the defined values; throws when none are defined.
double macro_average(const std::vector<std::optional<double>>& values);

struct ClassMetrics {
    std::string label;
    ClassCounts counts;
    std::optional<double> precision;  // percent, full precision
    std::optional<double> recall;
};

struct MetricsReport {
    std::string classifier;
    std::vector<ClassMetrics> classes;
};

MetricsReport build_metrics_report(const std::string& classifier,
                                   const std::vector<std::string>& vocabulary,
                                   const std::vector<ClassCounts>& counts);

// Display rounding used throughout the reports: half-up at `decimals`.
double round_half_up(double value, int decimals);

// CSV columns Event,Total,Correct,False,Miss,Precision,Recall with one
// row per class, percentages at one decimal, plus a trailing macro row
// averaging the rounded per-class values (the table style).
std::string emit_metrics_csv(const MetricsReport& report);
std::string emit_metrics_json(const MetricsReport& report);
MetricsReport parse_metrics_csv(const std::string& text);

// Classifier-comparison shape: Event,TrainN,TestN,ANN,KNN,SVM with
// per-class accuracy percentages; absent classifiers render as n/a.
struct ComparisonRow {
    std::string label;
    long long train_n = 0;
    long long test_n = 0;
    std::optional<double> ann;
    std::optional<double> knn;
    std::optional<double> svm;
};

std::string emit_comparison_csv(const std::vector<ComparisonRow>& rows);
std::string emit_comparison_json(const std::vector<ComparisonRow>& rows);

}  // namespace ritescene

#endif
