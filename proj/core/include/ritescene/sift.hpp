#ifndef RITESCENE_SIFT_HPP
#define RITESCENE_SIFT_HPP

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ritescene/frame.hpp"

namespace ritescene {

struct PyramidParams {
    int octaves = 4;
    int scales = 3;                    // s: intervals per octave
    double sigma = 1.6;                // base scale sigma0
    double contrast_threshold = 0.03;  // on |DoG| at the candidate
    double edge_ratio = 10.0;          // principal-curvature ratio bound r

    double scale_factor() const { return std::pow(2.0, 1.0 / scales); }
    void validate() const;
};

// Per-octave Gaussian stack L (s+3 levels) and DoG stack D (s+2 levels,
// D[i] = L[i+1] - L[i] by exact image subtraction). Gaussian levels are
// blurred directly from the octave base, so an octave's level i carries
// blur sigma0 * k^i in its own pixel units.
struct ScaleSpace {
    struct Octave {
        std::vector<Frame> gauss;
        std::vector<Frame> dog;
        std::vector<double> level_sigma;  // octave pixel units
    };
    PyramidParams params;
    int octaves_requested = 0;  // params.octaves before any clamping
    std::vector<Octave> octaves;
};

struct Keypoint {
    double x = 0.0;  // base-image units
    double y = 0.0;
    int octave = 0;
    int level = 0;       // DoG level index
    double sigma = 1.0;  // absolute scale
    double theta = 0.0;  // orientation, degrees in [0,360)
};

struct SiftFeature {
    Keypoint keypoint;
    std::array<double, 128> descriptor;
};

// Discrete 1-d Gaussian on radius ceil(3 sigma), normalized to sum 1.
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian blur with edge replication.
Frame gaussian_blur(const Frame& gray, double sigma);

// Octave count is clamped so the smallest octave stays at least 16 px
// on a side; compare octaves_requested with octaves.size() to detect it.
ScaleSpace build_scale_space(const Frame& gray, const PyramidParams& params);

// Strict 26-neighborhood extrema over 3x3x3 scale-space cubes, skipping
// the outermost DoG levels and a 1-pixel border. Ordered by
// (octave, level, y, x).
std::vector<Keypoint> detect_extrema(const ScaleSpace& space);

// Contrast gate on |DoG|, then the principal-curvature ratio test from
// the 2x2 discrete Hessian: reject when Det <= 0 or Tr^2/Det >= (r+1)^2/r.
std::vector<Keypoint> filter_keypoints(const std::vector<Keypoint>& candidates,
                                       const ScaleSpace& space,
                                       const PyramidParams& params);

// Central-difference gradient; returns (magnitude, orientation degrees
// in [0,360)). Out-of-range taps replicate the edge. Zero gradient
// maps to orientation 0.
std::pair<double, double> gradient_at(const Frame& gray, int x, int y);

// 36-bin magnitude-weighted histogram over a radius ceil(4.5 sigma)
// Gaussian window (sigma_w = 1.5 sigma); the single peak, refined by
// parabolic interpolation, becomes the keypoint orientation.
Keypoint assign_orientation(const Keypoint& kp, const ScaleSpace& space);

// 16x16 sample grid rotated to the keypoint orientation, 4x4 spatial
// cells x 8 orientation bins, trilinear binning, Gaussian weighting,
// L2 normalize / clamp at 0.2 / renormalize.
SiftFeature compute_descriptor(const Keypoint& kp, const ScaleSpace& space);

// Full detector/descriptor pipeline on one grayscale image.
std::vector<SiftFeature> extract(const Frame& gray, const PyramidParams& params);

// JSON-lines dump: one {x, y, sigma, theta, descriptor[128]} per keypoint.
std::string features_to_jsonl(const std::vector<SiftFeature>& feats);
std::vector<SiftFeature> features_from_jsonl(const std::string& text);

}  // namespace ritescene

#endif
