#include "ritescene/evalreport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ritescene/errors.hpp"

namespace ritescene {

namespace {
std::string format_percent(std::optional<double> value, int decimals) {
    if (!value) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f%%", decimals,
                  round_half_up(*value, decimals));
    return buf;
}

std::optional<double> parse_percent(const std::string& cell) {
    if (cell == "n/a") return std::nullopt;
    if (cell.empty() || cell.back() != '%')
        throw FormatError("metrics csv: bad percentage \"" + cell + "\"");
    return std::stod(cell.substr(0, cell.size() - 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}
}  // namespace

double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::floor(value * scale + 0.5) / scale;
}

std::optional<double> recall_percent(const ClassCounts& counts) {
    const long long denom = counts.correct + counts.miss;
    if (denom <= 0) return std::nullopt;
    return 100.0 * static_cast<double>(counts.correct) / static_cast<double>(denom);
}

std::optional<double> precision_percent(const ClassCounts& counts) {
    const long long denom = counts.correct + counts.false_pos;
    if (denom <= 0) return std::nullopt;
    return 100.0 * static_cast<double>(counts.correct) / static_cast<double>(denom);
}

std::vector<ClassCounts> confusion_counts(const std::vector<std::string>& predictions,
                                          const std::vector<std::string>& truths,
                                          const std::vector<std::string>& vocabulary) {
    if (predictions.size() != truths.size())
        throw InvariantError("confusion_counts: " + std::to_string(predictions.size()) +
                             " predictions vs " + std::to_string(truths.size()) +
                             " truths");
    auto class_index = [&](const std::string& label) {
        const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), label);
        if (it == vocabulary.end() || *it != label)
            throw InvariantError("confusion_counts: label \"" + label +
                                 "\" not in vocabulary");
        return static_cast<std::size_t>(it - vocabulary.begin());
    };

    std::vector<ClassCounts> counts(vocabulary.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const std::size_t p = class_index(predictions[i]);
        const std::size_t t = class_index(truths[i]);
        counts[t].total += 1;
        if (p == t) {
            counts[t].correct += 1;
        } else {
            counts[p].false_pos += 1;
            counts[t].miss += 1;
        }
    }
    return counts;
}

double macro_average(const std::vector<std::optional<double>>& values) {
    double sum = 0.0;
    int defined = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++defined;
        }
    }
    if (defined == 0)
        throw InvariantError("macro_average: no defined class metrics");
    return sum / defined;
}

MetricsReport build_metrics_report(const std::string& classifier,
                                   const std::vector<std::string>& vocabulary,
                                   const std::vector<ClassCounts>& counts) {
    if (vocabulary.size() != counts.size())
        throw InvariantError("build_metrics_report: vocabulary/counts size mismatch");
    MetricsReport report;
    report.classifier = classifier;
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        ClassMetrics m;
        m.label = vocabulary[i];
        m.counts = counts[i];
        m.precision = precision_percent(counts[i]);
        m.recall = recall_percent(counts[i]);
        report.classes.push_back(std::move(m));
    }
    return report;
}

namespace {
// Macro averages follow the table convention: the mean of the per-class
// values as displayed (rounded to one decimal).
std::pair<std::optional<double>, std::optional<double>> macro_of_rounded(
    const MetricsReport& report) {
    std::vector<std::optional<double>> precisions, recalls;
    for (const auto& c : report.classes) {
        precisions.push_back(c.precision ? std::optional<double>(round_half_up(*c.precision, 1))
                                         : std::nullopt);
        recalls.push_back(c.recall ? std::optional<double>(round_half_up(*c.recall, 1))
                                   : std::nullopt);
    }
    std::optional<double> mp, mr;
    try {
        mp = macro_average(precisions);
    } catch (const InvariantError&) {
    }
    try {
        mr = macro_average(recalls);
    } catch (const InvariantError&) {
    }
    return {mp, mr};
}
}  // namespace

std::string emit_metrics_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << "Event,Total,Correct,False,Miss,Precision,Recall\n";
    ClassCounts sums;
    for (const auto& c : report.classes) {
        out << c.label << "," << c.counts.total << "," << c.counts.correct << ","
            << c.counts.false_pos << "," << c.counts.miss << ","
            << format_percent(c.precision, 1) << "," << format_percent(c.recall, 1)
            << "\n";
        sums.total += c.counts.total;
        sums.correct += c.counts.correct;
        sums.false_pos += c.counts.false_pos;
        sums.miss += c.counts.miss;
    }
    if (!report.classes.empty()) {
        const auto [mp, mr] = macro_of_rounded(report);
        out << "macro," << sums.total << "," << sums.correct << ","
            << sums.false_pos << "," << sums.miss << "," << format_percent(mp, 2)
            << "," << format_percent(mr, 2) << "\n";
    }
    return out.str();
}

MetricsReport parse_metrics_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line != "Event,Total,Correct,False,Miss,Precision,Recall")
        throw FormatError("metrics csv: bad header");
    MetricsReport report;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 7)
            throw FormatError("metrics csv: expected 7 cells, got " +
                              std::to_string(cells.size()));
        if (cells[0] == "macro") continue;  // derived row, recomputed on emit
        ClassMetrics m;
        m.label = cells[0];
        m.counts.total = std::stoll(cells[1]);
        m.counts.correct = std::stoll(cells[2]);
        m.counts.false_pos = std::stoll(cells[3]);
        m.counts.miss = std::stoll(cells[4]);
        m.precision = parse_percent(cells[5]);
        m.recall = parse_percent(cells[6]);
        report.classes.push_back(std::move(m));
    }
    return report;
}

std::string emit_metrics_json(const MetricsReport& report) {
    nlohmann::json classes = nlohmann::json::array();
    int undefined = 0;
    for (const auto& c : report.classes) {
        nlohmann::json row{{"event", c.label},
                           {"total", c.counts.total},
                           {"correct", c.counts.correct},
                           {"false", c.counts.false_pos},
                           {"miss", c.counts.miss}};
        if (c.precision)
            row["precision"] = round_half_up(*c.precision, 1);
        else
            row["precision"] = nullptr;
        if (c.recall)
            row["recall"] = round_half_up(*c.recall, 1);
        else
            row["recall"] = nullptr;
        if (!c.precision || !c.recall) ++undefined;
        classes.push_back(std::move(row));
    }
    const auto [mp, mr] = report.classes.empty()
                              ? std::pair<std::optional<double>, std::optional<double>>{}
                              : macro_of_rounded(report);
    nlohmann::json doc{{"classifier", report.classifier}, {"classes", classes}};
    doc["macro"] = {{"precision", mp ? nlohmann::json(round_half_up(*mp, 2))
                                     : nlohmann::json(nullptr)},
                    {"recall", mr ? nlohmann::json(round_half_up(*mr, 2))
                                  : nlohmann::json(nullptr)}};
    doc["undefined_classes"] = undefined;
    return doc.dump(2) + "\n";
}

std::string emit_comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << "Event,TrainN,TestN,ANN,KNN,SVM\n";
    for (const auto& r : rows) {
        out << r.label << "," << r.train_n << "," << r.test_n << ","
            << format_percent(r.ann, 1) << "," << format_percent(r.knn, 1) << ","
            << format_percent(r.svm, 1) << "\n";
    }
    return out.str();
}

std::string emit_comparison_json(const std::vector<ComparisonRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"event", r.label},
                           {"train_samples", r.train_n},
                           {"test_samples", r.test_n}};
        row["ann"] = r.ann ? nlohmann::json(round_half_up(*r.ann, 1)) : nlohmann::json(nullptr);
        row["knn"] = r.knn ? nlohmann::json(round_half_up(*r.knn, 1)) : nlohmann::json(nullptr);
        row["svm"] = r.svm ? nlohmann::json(round_half_up(*r.svm, 1)) : nlohmann::json(nullptr);
        arr.push_back(std::move(row));
    }
    return nlohmann::json{{"comparison", arr}}.dump(2) + "\n";
}

}  // namespace ritescene
