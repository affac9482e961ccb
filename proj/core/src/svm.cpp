#include <algorithm>
#include <cmath>

#include "ritescene/classify.hpp"
#include "ritescene/errors.hpp"
#include "ritescene/rng.hpp"

namespace ritescene {

namespace {
constexpr double kStepEps = 1e-12;
constexpr long long kMaxAcceptedSteps = 2000000;

// Eigenvalues of a symmetric matrix by the cyclic Jacobi method. Only
// used to vet custom kernels, so n stays small.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                off += a[static_cast<std::size_t>(i) * n + j] *
                       a[static_cast<std::size_t>(i) * n + j];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<std::size_t>(p) * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                const double app = a[static_cast<std::size_t>(p) * n + p];
                const double aqq = a[static_cast<std::size_t>(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[static_cast<std::size_t>(k) * n + p];
                    const double akq = a[static_cast<std::size_t>(k) * n + q];
                    a[static_cast<std::size_t>(k) * n + p] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k) * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[static_cast<std::size_t>(p) * n + k];
                    const double aqk = a[static_cast<std::size_t>(q) * n + k];
                    a[static_cast<std::size_t>(p) * n + k] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q) * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i) * n + i];
    return eig;
}

struct SmoState {
    const std::vector<std::vector<double>>& x;
    const std::vector<double>& y;
    std::vector<double> kernel_matrix;  // n x n
    std::vector<double> alpha;
    std::vector<double> error;  // E_i = f(x_i) - y_i
    double bias = 0.0;
    double c;
    double tol;
    Rng rng;
    std::vector<double>* trace;
    long long accepted = 0;

    std::size_t n() const { return x.size(); }
    double k(std::size_t i, std::size_t j) const {
        return kernel_matrix[i * n() + j];
    }

    double dual_objective() const {
        double sum = 0.0, quad = 0.0;
        for (std::size_t i = 0; i < n(); ++i) {
            if (alpha[i] == 0.0) continue;
            sum += alpha[i];
            for (std::size_t j = 0; j < n(); ++j) {
                if (alpha[j] == 0.0) continue;
                quad += alpha[i] * alpha[j] * y[i] * y[j] * k(i, j);
            }
        }
        return sum - 0.5 * quad;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1_old = alpha[i1];
        const double a2_old = alpha[i2];
        const double y1 = y[i1], y2 = y[i2];
        const double e1 = error[i1], e2 = error[i2];
        const double s = y1 * y2;
        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(c, c + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - c);
            hi = std::min(c, a1_old + a2_old);
        }
        if (lo >= hi) return false;

        const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;
        double a2;
        if (eta > 0.0) {
            a2 = a2_old + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // Flat or concave direction: evaluate the dual at both ends.
            const double f1 = y1 * e1 - a1_old * k11 - s * a2_old * k12;
            const double f2 = y2 * e2 - s * a1_old * k12 - a2_old * k22;
            const double l1 = a1_old + s * (a2_old - lo);
            const double h1 = a1_old + s * (a2_old - hi);
            const double lo_obj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double hi_obj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (lo_obj < hi_obj - kStepEps)
                a2 = lo;
            else if (lo_obj > hi_obj + kStepEps)
                a2 = hi;
            else
                return false;
        }
        if (std::fabs(a2 - a2_old) < kStepEps * (a2 + a2_old + kStepEps)) return false;
        const double a1 = a1_old + s * (a2_old - a2);

        const double b1 = e1 + y1 * (a1 - a1_old) * k11 + y2 * (a2 - a2_old) * k12 + bias;
        const double b2 = e2 + y1 * (a1 - a1_old) * k12 + y2 * (a2 - a2_old) * k22 + bias;
        double b_new;
        if (a1 > 0.0 && a1 < c)
            b_new = b1;
        else if (a2 > 0.0 && a2 < c)
            b_new = b2;
        else
            b_new = (b1 + b2) / 2.0;

        const double d1 = y1 * (a1 - a1_old);
        const double d2 = y2 * (a2 - a2_old);
        for (std::size_t i = 0; i < n(); ++i)
            error[i] += d1 * k(i1, i) + d2 * k(i2, i) + (bias - b_new);
        alpha[i1] = a1;
        alpha[i2] = a2;
        bias = b_new;
        ++accepted;
        if (trace) trace->push_back(dual_objective());
        return true;
    }

    bool examine(std::size_t i2) {
        const double y2 = y[i2];
        const double a2 = alpha[i2];
        const double e2 = error[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -tol && a2 < c) || (r2 > tol && a2 > 0.0))) return false;

        // Heuristic 1: the unbound point with the largest |E1 - E2|.
        std::size_t best = n();
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n(); ++i) {
            if (alpha[i] <= 0.0 || alpha[i] >= c) continue;
            const double gap = std::fabs(error[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n() && take_step(best, i2)) return true;

        // Heuristic 2: sweep unbound points from a seeded start.
        const std::size_t offset = static_cast<std::size_t>(rng.next_u64() % n());
        for (std::size_t d = 0; d < n(); ++d) {
            const std::size_t i = (offset + d) % n();
            if (alpha[i] <= 0.0 || alpha[i] >= c) continue;
            if (take_step(i, i2)) return true;
        }
        // Heuristic 3: sweep everything.
        const std::size_t offset2 = static_cast<std::size_t>(rng.next_u64() % n());
        for (std::size_t d = 0; d < n(); ++d) {
            const std::size_t i = (offset2 + d) % n();
            if (take_step(i, i2)) return true;
        }
        return false;
    }
};
}  // namespace

void KernelSpec::validate() const {
    switch (kind) {
        case KernelKind::Rbf:
            if (gamma <= 0.0) throw InvariantError("svm.gamma must be > 0");
            break;
        case KernelKind::Polynomial:
            if (degree < 1) throw InvariantError("svm.degree must be >= 1");
            break;
        case KernelKind::Custom:
            if (!custom) throw InvariantError("custom kernel function is empty");
            break;
        case KernelKind::Linear:
            break;
    }
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    if (x.size() != y.size())
        throw InvariantError("kernel_eval: dimension mismatch");
    switch (spec.kind) {
        case KernelKind::Linear: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return dot;
        }
        case KernelKind::Polynomial: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return std::pow(dot + 1.0, spec.degree);
        }
        case KernelKind::Rbf: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                d2 += d * d;
            }
            return std::exp(-spec.gamma * d2);
        }
        case KernelKind::Custom:
            return spec.custom(x, y);
    }
    throw InvariantError("kernel_eval: unknown kernel kind");
}

SvmBinaryModel svm_train_binary(const std::vector<std::vector<double>>& features,
                                const std::vector<double>& y, const KernelSpec& kernel,
                                double c, double tol, std::uint64_t seed,
                                SvmTrainDiagnostics* diagnostics) {
    kernel.validate();
    if (c <= 0.0) throw InvariantError("svm.c must be > 0");
    if (tol <= 0.0) throw InvariantError("svm.tol must be > 0");
    if (features.size() != y.size() || features.empty())
        throw InvariantError("svm_train_binary: bad training set");
    bool has_pos = false, has_neg = false;
    for (double v : y) {
        if (v == 1.0) has_pos = true;
        else if (v == -1.0) has_neg = true;
        else throw InvariantError("svm_train_binary: labels must be +-1");
    }
    if (!has_pos || !has_neg)
        throw InvariantError("svm_train_binary: single-class data");

    const std::size_t n = features.size();
    SvmBinaryModel model;
    model.kernel = kernel;
    model.c = c;

    SmoState smo{features, y, {}, {}, {}, 0.0, c, tol, Rng(seed), &model.dual_trace, 0};
    smo.kernel_matrix.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_eval(kernel, features[i], features[j]);
            smo.kernel_matrix[i * n + j] = v;
            smo.kernel_matrix[j * n + i] = v;
        }

    if (kernel.kind == KernelKind::Custom) {
        // PSD sanity check on the training Gram; a warning, not fatal.
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            scale = std::max(scale, std::fabs(smo.kernel_matrix[i * n + i]));
        const auto eig = symmetric_eigenvalues(smo.kernel_matrix, static_cast<int>(n));
        const double min_eig = *std::min_element(eig.begin(), eig.end());
        if (min_eig < -1e-8 * std::max(scale, 1.0)) model.gram_psd_warning = true;
    }

    smo.alpha.assign(n, 0.0);
    smo.error.resize(n);
    for (std::size_t i = 0; i < n; ++i) smo.error[i] = -y[i];

    bool examine_all = true;
    std::size_t changed = 0;
    while (smo.accepted < kMaxAcceptedSteps) {
        changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!examine_all && (smo.alpha[i] <= 0.0 || smo.alpha[i] >= c)) continue;
            if (smo.examine(i)) ++changed;
        }
        if (examine_all) {
            if (changed == 0) break;
            examine_all = false;
        } else if (changed == 0) {
            examine_all = true;
        }
    }

    // Bias from the unbounded support vectors (all support vectors when
    // none are unbounded).
    double bias_sum = 0.0;
    int bias_count = 0;
    auto margin = [&](std::size_t i) {
        double f = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (smo.alpha[j] == 0.0) continue;
            f += smo.alpha[j] * y[j] * smo.k(j, i);
        }
        return f;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (smo.alpha[i] > 0.0 && smo.alpha[i] < c) {
            bias_sum += y[i] - margin(i);
            ++bias_count;
        }
    }
    if (bias_count == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (smo.alpha[i] > 0.0) {
                bias_sum += y[i] - margin(i);
                ++bias_count;
            }
        }
    }
    model.bias = bias_count > 0 ? bias_sum / bias_count : 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        if (smo.alpha[i] > 0.0) {
            model.sv_features.push_back(features[i]);
            model.sv_alpha.push_back(smo.alpha[i]);
            model.sv_y.push_back(y[i]);
        }
    }

    if (diagnostics) {
        diagnostics->alphas = smo.alpha;
        diagnostics->accepted_steps = smo.accepted;
        diagnostics->alpha_y_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diagnostics->alpha_y_sum += smo.alpha[i] * y[i];
        diagnostics->max_kkt_violation =
            svm_max_kkt_violation(features, y, smo.alpha, model.bias, kernel, c);
    }
    return model;
}

double svm_predict_binary(const SvmBinaryModel& model, std::span<const double> query) {
    double f = model.bias;
    for (std::size_t i = 0; i < model.sv_features.size(); ++i)
        f += model.sv_alpha[i] * model.sv_y[i] *
             kernel_eval(model.kernel, model.sv_features[i], query);
    return f;
}

double svm_max_kkt_violation(const std::vector<std::vector<double>>& features,
                             const std::vector<double>& y,
                             const std::vector<double>& alphas, double bias,
                             const KernelSpec& kernel, double c) {
    const std::size_t n = features.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = bias;
        for (std::size_t j = 0; j < n; ++j) {
            if (alphas[j] == 0.0) continue;
            f += alphas[j] * y[j] * kernel_eval(kernel, features[j], features[i]);
        }
        const double m = y[i] * f;
        double violation = 0.0;
        if (alphas[i] <= 0.0)
            violation = std::max(0.0, 1.0 - m);  // must have margin >= 1
        else if (alphas[i] >= c)
            violation = std::max(0.0, m - 1.0);  // must have margin <= 1
        else
            violation = std::fabs(m - 1.0);  // unbounded SV sits on the margin
        worst = std::max(worst, violation);
    }
    return worst;
}

}  // namespace ritescene
