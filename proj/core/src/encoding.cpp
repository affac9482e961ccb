#include "ritescene/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "ritescene/base64.hpp"
#include "ritescene/errors.hpp"
#include "ritescene/parallel.hpp"
#include "ritescene/rng.hpp"

namespace ritescene {

namespace {
constexpr double kSweepTolerance = 1e-6;
constexpr int kMaxSweeps = 500;

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// Solves A X = B for X (A: n x n, B: n x m, row-major) by Gaussian
// elimination with partial pivoting. A and B are clobbered.
void solve_inplace(std::vector<double>& a, std::vector<double>& b, int n, int m) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(a[static_cast<std::size_t>(col) * n + col]);
        for (int row = col + 1; row < n; ++row) {
            const double v = std::fabs(a[static_cast<std::size_t>(row) * n + col]);
            if (v > best) {
                best = v;
                pivot = row;
            }
        }
        if (best == 0.0) throw InvariantError("singular system in basis update");
        if (pivot != col) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(pivot) * n + j],
                          a[static_cast<std::size_t>(col) * n + j]);
            for (int j = 0; j < m; ++j)
                std::swap(b[static_cast<std::size_t>(pivot) * m + j],
                          b[static_cast<std::size_t>(col) * m + j]);
        }
        const double inv = 1.0 / a[static_cast<std::size_t>(col) * n + col];
        for (int row = col + 1; row < n; ++row) {
            const double f = a[static_cast<std::size_t>(row) * n + col] * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j)
                a[static_cast<std::size_t>(row) * n + j] -=
                    f * a[static_cast<std::size_t>(col) * n + j];
            for (int j = 0; j < m; ++j)
                b[static_cast<std::size_t>(row) * m + j] -=
                    f * b[static_cast<std::size_t>(col) * m + j];
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        const double inv = 1.0 / a[static_cast<std::size_t>(col) * n + col];
        for (int j = 0; j < m; ++j) {
            double acc = b[static_cast<std::size_t>(col) * m + j];
            for (int k = col + 1; k < n; ++k)
                acc -= a[static_cast<std::size_t>(col) * n + k] *
                       b[static_cast<std::size_t>(k) * m + j];
            b[static_cast<std::size_t>(col) * m + j] = acc * inv;
        }
    }
}
}  // namespace

double SparseCode::sparsity() const {
    if (coefficients.empty()) return 0.0;
    std::size_t zeros = 0;
    for (double v : coefficients)
        if (v == 0.0) ++zeros;
    return static_cast<double>(zeros) / static_cast<double>(coefficients.size());
}

SparseEncoder::SparseEncoder(const Dictionary& dict) : dict_(dict) {
    if (dict.atom_count < 1 || dict.dim < 1)
        throw InvariantError("sparse_encode: dictionary is not trained");
    const int m = dict.atom_count;
    gram_.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        const auto ai = dict.atom(i);
        for (int j = i; j < m; ++j) {
            const auto aj = dict.atom(j);
            double dot = 0.0;
            for (int d = 0; d < dict.dim; ++d) dot += ai[d] * aj[d];
            gram_[static_cast<std::size_t>(i) * m + j] = dot;
            gram_[static_cast<std::size_t>(j) * m + i] = dot;
        }
    }
}

SparseCode SparseEncoder::encode(std::span<const double> x) const {
    return encode_warm(x, {});
}

SparseCode SparseEncoder::encode_warm(std::span<const double> x,
                                      std::span<const double> start) const {
    const int m = dict_.atom_count;
    if (static_cast<int>(x.size()) != dict_.dim)
        throw InvariantError("sparse_encode: input dimension " +
                             std::to_string(x.size()) + " != dictionary dim " +
                             std::to_string(dict_.dim));
    for (double v : x)
        if (!std::isfinite(v))
            throw InvariantError("sparse_encode: non-finite input");
    if (!start.empty() && static_cast<int>(start.size()) != m)
        throw InvariantError("sparse_encode: warm start has wrong dimension");

    // corr[j] = atom_j . x
    std::vector<double> corr(m, 0.0);
    for (int j = 0; j < m; ++j) {
        const auto atom = dict_.atom(j);
        double dot = 0.0;
        for (int d = 0; d < dict_.dim; ++d) dot += atom[d] * x[d];
        corr[j] = dot;
    }

    SparseCode code;
    code.coefficients.assign(m, 0.0);
    // ga[j] = (Gram * a)_j, maintained incrementally.
    std::vector<double> ga(m, 0.0);
    if (!start.empty()) {
        for (int j = 0; j < m; ++j) code.coefficients[j] = start[j];
        for (int j = 0; j < m; ++j) {
            const double aj = code.coefficients[j];
            if (aj == 0.0) continue;
            const double* grow = gram_.data() + static_cast<std::size_t>(j) * m;
            for (int l = 0; l < m; ++l) ga[l] += aj * grow[l];
        }
    }

    const double threshold = dict_.lambda / 2.0;
    double* a = code.coefficients.data();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_delta = 0.0;
        for (int j = 0; j < m; ++j) {
            const double gjj = gram_[static_cast<std::size_t>(j) * m + j];
            // atom_j . (x - sum_{l != j} a_l atom_l)
            const double rho = corr[j] - ga[j] + gjj * a[j];
            const double updated = soft_threshold(rho, threshold) / gjj;
            const double delta = updated - a[j];
            if (delta != 0.0) {
                a[j] = updated;
                const double* grow = gram_.data() + static_cast<std::size_t>(j) * m;
                for (int l = 0; l < m; ++l) ga[l] += delta * grow[l];
                max_delta = std::max(max_delta, std::fabs(delta));
            }
        }
        if (max_delta < kSweepTolerance) break;
    }
    return code;
}

SparseCode sparse_encode(std::span<const double> x, const Dictionary& dict) {
    return SparseEncoder(dict).encode(x);
}

double encoding_objective(std::span<const double> x, const Dictionary& dict,
                          std::span<const double> code) {
    if (static_cast<int>(code.size()) != dict.atom_count)
        throw InvariantError("encoding_objective: code dimension mismatch");
    std::vector<double> recon(x.size(), 0.0);
    for (int j = 0; j < dict.atom_count; ++j) {
        const double aj = code[j];
        if (aj == 0.0) continue;
        const auto atom = dict.atom(j);
        for (std::size_t d = 0; d < x.size(); ++d) recon[d] += aj * atom[d];
    }
    double err = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - recon[d];
        err += diff * diff;
    }
    double l1 = 0.0;
    for (double v : code) l1 += std::fabs(v);
    return err + dict.lambda * l1;
}

Dictionary learn_dictionary(const std::vector<std::vector<double>>& descriptors,
                            int atom_count, double lambda, int iterations,
                            std::uint64_t seed, int workers) {
    if (atom_count < 1) throw InvariantError("dict.m must be >= 1");
    if (lambda < 0.0) throw InvariantError("dict.lambda must be >= 0");
    if (iterations < 0) throw InvariantError("dict.iterations must be >= 0");
    if (descriptors.size() < static_cast<std::size_t>(atom_count))
        throw InvariantError("learn_dictionary: " + std::to_string(descriptors.size()) +
                             " descriptors < " + std::to_string(atom_count) + " atoms");
    const int dim = static_cast<int>(descriptors.front().size());
    for (const auto& d : descriptors)
        if (static_cast<int>(d.size()) != dim)
            throw InvariantError("learn_dictionary: descriptors have mixed dimensions");

    Dictionary dict;
    dict.atom_count = atom_count;
    dict.dim = dim;
    dict.lambda = lambda;
    dict.seed = seed;
    dict.iterations = iterations;
    dict.basis.assign(static_cast<std::size_t>(atom_count) * dim, 0.0);

    // Seeded init: shuffle indices, take the first M descriptors with
    // nonzero norm, normalize.
    Rng rng(seed);
    std::vector<std::size_t> order(descriptors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1],
                  order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    int filled = 0;
    for (std::size_t pos = 0; pos < order.size() && filled < atom_count; ++pos) {
        const auto& d = descriptors[order[pos]];
        double norm = 0.0;
        for (double v : d) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-12) continue;
        double* atom = dict.basis.data() + static_cast<std::size_t>(filled) * dim;
        for (int j = 0; j < dim; ++j) atom[j] = d[j] / norm;
        ++filled;
    }
    if (filled < atom_count)
        throw InvariantError("learn_dictionary: fewer than M nonzero descriptors");

    if (iterations == 0) return dict;

    const std::size_t n = descriptors.size();
    std::vector<std::vector<double>> codes(n);
    auto total_objective = [&](const Dictionary& d) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            total += encoding_objective(descriptors[i], d, codes[i]);
        return total;
    };

    double previous_objective = 0.0;
    for (int iter = 0; iter < iterations; ++iter) {
        const SparseEncoder encoder(dict);
        parallel_for(n, workers, [&](std::size_t i) {
            SparseCode c = iter == 0 ? encoder.encode(descriptors[i])
                                     : encoder.encode_warm(descriptors[i], codes[i]);
            codes[i] = std::move(c.coefficients);
        });
        const double objective = total_objective(dict);
        dict.objective_trace.push_back(objective);
        previous_objective = objective;

        // MOD basis update: minimize sum ||x - B^T a||^2 over B via the
        // normal equations (sum a a^T) B = (sum a x^T).
        const int m = atom_count;
        std::vector<double> aat(static_cast<std::size_t>(m) * m, 0.0);
        std::vector<double> axt(static_cast<std::size_t>(m) * dim, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = codes[i];
            const auto& x = descriptors[i];
            for (int p = 0; p < m; ++p) {
                const double ap = a[p];
                if (ap == 0.0) continue;
                double* aat_row = aat.data() + static_cast<std::size_t>(p) * m;
                for (int q = 0; q < m; ++q) aat_row[q] += ap * a[q];
                double* axt_row = axt.data() + static_cast<std::size_t>(p) * dim;
                for (int d = 0; d < dim; ++d) axt_row[d] += ap * x[d];
            }
        }
        double ridge = 0.0;
        for (int p = 0; p < m; ++p) ridge = std::max(ridge, aat[static_cast<std::size_t>(p) * m + p]);
        ridge = std::max(ridge, 1.0) * 1e-12;
        for (int p = 0; p < m; ++p) aat[static_cast<std::size_t>(p) * m + p] += ridge;

        Dictionary updated = dict;
        std::vector<double> solved = axt;
        solve_inplace(aat, solved, m, dim);
        std::vector<std::vector<double>> rescaled = codes;
        for (int p = 0; p < m; ++p) {
            double* atom = solved.data() + static_cast<std::size_t>(p) * dim;
            double norm = 0.0;
            for (int d = 0; d < dim; ++d) norm += atom[d] * atom[d];
            norm = std::sqrt(norm);
            if (norm < 1e-12) {
                // Unused atom: keep the previous one.
                const double* old_atom =
                    dict.basis.data() + static_cast<std::size_t>(p) * dim;
                std::copy(old_atom, old_atom + dim,
                          updated.basis.begin() + static_cast<std::size_t>(p) * dim);
                continue;
            }
            for (int d = 0; d < dim; ++d)
                updated.basis[static_cast<std::size_t>(p) * dim + d] = atom[d] / norm;
            for (std::size_t i = 0; i < n; ++i) rescaled[i][p] *= norm;
        }
        std::swap(codes, rescaled);
        const double candidate = [&] {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                total += encoding_objective(descriptors[i], updated, codes[i]);
            return total;
        }();
        if (candidate <= previous_objective) {
            dict.basis = std::move(updated.basis);
        } else {
            // Reject updates that would raise the objective so the
            // recorded trace stays non-increasing.
            std::swap(codes, rescaled);
        }
    }
    return dict;
}

ImageFeature pool_codes(const std::vector<SparseCode>& codes, int atom_count) {
    ImageFeature feat;
    feat.values.assign(static_cast<std::size_t>(atom_count), 0.0);
    feat.descriptor_count = codes.size();
    for (const auto& code : codes) {
        if (static_cast<int>(code.coefficients.size()) != atom_count)
            throw InvariantError("pool_codes: mixed code dimensions");
        for (int j = 0; j < atom_count; ++j)
            feat.values[static_cast<std::size_t>(j)] =
                std::max(feat.values[static_cast<std::size_t>(j)],
                         std::fabs(code.coefficients[static_cast<std::size_t>(j)]));
    }
    return feat;
}

std::string Dictionary::to_json() const {
    nlohmann::json doc{
        {"atom_count", atom_count}, {"dim", dim},
        {"lambda", lambda},         {"seed", seed},
        {"iterations", iterations}, {"objective_trace", objective_trace},
        {"basis", doubles_to_base64(basis)},
    };
    return doc.dump(2) + "\n";
}

Dictionary Dictionary::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("dictionary: ") + e.what());
    }
    try {
        Dictionary dict;
        dict.atom_count = doc.at("atom_count").get<int>();
        dict.dim = doc.at("dim").get<int>();
        dict.lambda = doc.at("lambda").get<double>();
        dict.seed = doc.at("seed").get<std::uint64_t>();
        dict.iterations = doc.at("iterations").get<int>();
        dict.objective_trace = doc.at("objective_trace").get<std::vector<double>>();
        dict.basis = base64_to_doubles(doc.at("basis").get<std::string>());
        if (dict.basis.size() !=
            static_cast<std::size_t>(dict.atom_count) * dict.dim)
            throw FormatError("dictionary: basis size mismatch");
        return dict;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("dictionary: ") + e.what());
    }
}

}  // namespace ritescene
