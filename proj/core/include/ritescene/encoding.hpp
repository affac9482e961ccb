#ifndef RITESCENE_ENCODING_HPP
#define RITESCENE_ENCODING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ritescene {

// Learned sparse-coding basis: atom_count unit-norm vectors of
// dimension dim, flattened row-major (atom j at [j*dim, (j+1)*dim)).
struct Dictionary {
    int atom_count = 0;  // M
    int dim = 0;
    double lambda = 0.15;
    std::uint64_t seed = 0;
    int iterations = 0;
    std::vector<double> basis;
    std::vector<double> objective_trace;  // one value per alternation

    std::span<const double> atom(int j) const {
        return {basis.data() + static_cast<std::size_t>(j) * dim,
                static_cast<std::size_t>(dim)};
    }

    std::string to_json() const;
    static Dictionary from_json(const std::string& text);
};

struct SparseCode {
    std::vector<double> coefficients;

    double sparsity() const;  // fraction of exact zeros
};

// Componentwise max of |coefficients| across an image's codes; the zero
// vector when the image produced no descriptors.
struct ImageFeature {
    std::vector<double> values;
    std::size_t descriptor_count = 0;
};

// Minimizes ||x - sum_j a_j phi_j||^2 + lambda * sum_j |a_j| by cyclic
// coordinate descent with soft-thresholding. Converged when the largest
// coefficient change in a sweep drops below 1e-6, capped at 500 sweeps.
SparseCode sparse_encode(std::span<const double> x, const Dictionary& dict);

// Precomputes the Gram matrix once for encoding many vectors against a
// fixed dictionary.
class SparseEncoder {
public:
    explicit SparseEncoder(const Dictionary& dict);

    SparseCode encode(std::span<const double> x) const;
    // Descent-only encode starting from a caller-provided code.
    SparseCode encode_warm(std::span<const double> x,
                           std::span<const double> start) const;

private:
    const Dictionary& dict_;
    std::vector<double> gram_;  // M x M
};

// The lasso objective for one sample at a given code.
double encoding_objective(std::span<const double> x, const Dictionary& dict,
                          std::span<const double> code);

// Alternating minimization: encode all samples, then a least-squares
// basis update renormalized to unit atoms (codes rescaled to keep the
// reconstruction unchanged). A basis update that would raise the joint
// objective is discarded, which keeps the recorded trace non-increasing.
// Deterministic for a given seed: the initial basis is a seeded sample
// of the input descriptors.
Dictionary learn_dictionary(const std::vector<std::vector<double>>& descriptors,
                            int atom_count, double lambda, int iterations,
                            std::uint64_t seed, int workers = 1);

ImageFeature pool_codes(const std::vector<SparseCode>& codes, int atom_count);

}  // namespace ritescene

#endif
