#ifndef RITESCENE_SHOTSEG_HPP
#define RITESCENE_SHOTSEG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ritescene/frame.hpp"
#include "ritescene/sequence.hpp"

namespace ritescene {

struct ShotParams {
    int k = 10;                        // frame skip AND keyframe stride
    double motion_threshold = 0.10;    // mean circular hue distance, [0,1]
    double block_threshold = 0.25;     // fraction of changed blocks
    int block_size = 64;
    double block_change_level = 0.08;  // mean |RGB| diff that marks a block changed

    void validate() const;
};

struct Shot {
    std::size_t start;  // inclusive
    std::size_t end;    // exclusive
    std::vector<std::size_t> keyframes;
};

struct ShotList {
    std::vector<Shot> shots;
    std::size_t source_length = 0;
};

// Mean circular hue distance between two HSI frames, scaled so that
// antipodal hues everywhere give 1.
double hue_motion_difference(const Frame& a, const Frame& b);

// Fraction of block_size x block_size tiles whose mean absolute RGB
// difference exceeds params.block_change_level. Edge tiles may be
// smaller.
double block_change_ratio(const Frame& a, const Frame& b, const ShotParams& params);

// Samples the sequence at stride k and compares frame i with frame i+k;
// a boundary lands at i+k when both the hue metric and the block metric
// exceed their thresholds. Gradual transitions shorter than k collapse
// to a single cut. Each shot's keyframes are every k-th frame from its
// first frame.
ShotList detect_shots(const FrameSequence& seq, const ShotParams& params);

// JSON array of {start, end, keyframes}.
std::string export_shots(const ShotList& shots);
ShotList parse_shots(const std::string& json_text);

}  // namespace ritescene

#endif
