#ifndef RITESCENE_SYNTH_HPP
#define RITESCENE_SYNTH_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ritescene/frame.hpp"

namespace ritescene {

// The six scene families, one per ritual label. Each family has a
// distinct background structure and color palette; samples within a
// family jitter the structural parameters.
extern const std::array<std::string, 6> kSceneLabels;

struct SynthParams {
    int samples_per_class = 10;
    int frames_per_sample = 60;
    int width = 160;
    int height = 120;
    double noise = 0.01;      // per-frame uniform noise amplitude
    int square_size = 12;     // moving foreground square
    std::uint64_t seed = 42;
};

// Deterministic per (seed, class, sample): regenerating any subtree
// yields byte-identical frames.
std::vector<Frame> generate_scene_frames(int class_id, std::uint64_t scene_seed,
                                         int frames, int width, int height,
                                         double noise, int square_size);

// Writes dest/<label>/sample_NNN/frame_NNNNNN.ppm for every class and
// sample. Returns the list of written sample directories.
std::vector<std::filesystem::path> generate_synthetic(
    const std::filesystem::path& dest, const SynthParams& params);

// Several scenes hard-cut together, for shot-boundary evaluation.
struct CutVideo {
    std::vector<Frame> frames;
    std::vector<std::size_t> boundaries;  // first frame of each later scene
};

CutVideo generate_cut_video(std::uint64_t seed, int scene_count, int min_scene_len,
                            int max_scene_len, int width, int height, double noise);

// Textured background with a moving square and per-frame ground truth,
// for segmentation scoring. The first `clean_frames` frames carry no
// square.
struct SquareScene {
    std::vector<Frame> frames;
    // x0, y0, x1, y1 (exclusive); {0,0,0,0} for clean frames.
    std::vector<std::array<int, 4>> truth;
};

SquareScene generate_square_scene(std::uint64_t seed, int clean_frames,
                                  int square_frames, int width, int height,
                                  int square_size, double noise);

}  // namespace ritescene

#endif
