#ifndef RITESCENE_SEQUENCE_HPP
#define RITESCENE_SEQUENCE_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ritescene/frame.hpp"

namespace ritescene {

// Ordered frame access, backed either by PPM files on disk (decoded
// lazily, ordered by lexicographic filename) or by in-memory frames.
// All frames must share one dimension; the mismatch is reported on
// first access of the offending frame, naming its file.
class FrameSequence {
public:
    static FrameSequence from_paths(std::vector<std::filesystem::path> paths,
                                    double fps = 30.0);
    static FrameSequence from_frames(std::vector<Frame> frames, double fps = 30.0);

    std::size_t size() const;
    bool empty() const { return size() == 0; }
    double fps() const { return fps_; }

    Frame frame(std::size_t index) const;

    // Path of frame i, empty for in-memory sequences.
    std::filesystem::path path(std::size_t index) const;

private:
    FrameSequence() = default;

    std::vector<std::filesystem::path> paths_;
    std::shared_ptr<std::vector<Frame>> frames_;
    double fps_ = 30.0;
    // Reference dimensions, established by the first decoded frame.
    mutable std::optional<std::pair<int, int>> dims_;
};

// True when name matches the glob (supports '*' and '?').
bool glob_match(const std::string& pattern, const std::string& name);

// Frames are files in `directory` matching `pattern`, ordered by
// lexicographic byte order of their filenames.
FrameSequence load_sequence(const std::filesystem::path& directory,
                            const std::string& pattern = "frame_*.ppm",
                            double fps = 30.0);

}  // namespace ritescene

#endif
