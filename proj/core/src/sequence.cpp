#include "ritescene/sequence.hpp"

#include <algorithm>

#include "ritescene/errors.hpp"
#include "ritescene/ppm.hpp"

namespace ritescene {

FrameSequence FrameSequence::from_paths(std::vector<std::filesystem::path> paths,
                                        double fps) {
    FrameSequence seq;
    seq.paths_ = std::move(paths);
    seq.fps_ = fps;
    return seq;
}

FrameSequence FrameSequence::from_frames(std::vector<Frame> frames, double fps) {
    FrameSequence seq;
    seq.frames_ = std::make_shared<std::vector<Frame>>(std::move(frames));
    seq.fps_ = fps;
    if (!seq.frames_->empty()) {
        for (std::size_t i = 1; i < seq.frames_->size(); ++i)
            require_same_dimensions((*seq.frames_)[0], (*seq.frames_)[i],
                                    "frame sequence");
        seq.dims_ = {(*seq.frames_)[0].width(), (*seq.frames_)[0].height()};
    }
    return seq;
}

std::size_t FrameSequence::size() const {
    return frames_ ? frames_->size() : paths_.size();
}

Frame FrameSequence::frame(std::size_t index) const {
    if (index >= size())
        throw InvariantError("frame index " + std::to_string(index) +
                             " out of range (sequence has " +
                             std::to_string(size()) + " frames)");
    if (frames_) return (*frames_)[index];

    Frame f = read_ppm(paths_[index]);
    if (!dims_) {
        dims_ = {f.width(), f.height()};
    } else if (f.width() != dims_->first || f.height() != dims_->second) {
        throw FormatError("dimension mismatch: " + paths_[index].string() + " is " +
                          std::to_string(f.width()) + "x" + std::to_string(f.height()) +
                          ", sequence is " + std::to_string(dims_->first) + "x" +
                          std::to_string(dims_->second));
    }
    return f;
}

std::filesystem::path FrameSequence::path(std::size_t index) const {
    if (frames_ || index >= paths_.size()) return {};
    return paths_[index];
}

bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string::npos, star_n = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_n = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++star_n;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

FrameSequence load_sequence(const std::filesystem::path& directory,
                            const std::string& pattern, double fps) {
    std::error_code ec;
    if (!std::filesystem::is_directory(directory, ec))
        throw IoError("not a directory: " + directory.string());

    std::vector<std::filesystem::path> matched;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        if (glob_match(pattern, entry.path().filename().string()))
            matched.push_back(entry.path());
    }
    if (matched.empty())
        throw IoError("no frames matched \"" + pattern + "\" in " +
                      directory.string());
    std::sort(matched.begin(), matched.end(),
              [](const auto& a, const auto& b) {
                  return a.filename().string() < b.filename().string();
              });
    return FrameSequence::from_paths(std::move(matched), fps);
}

}  // namespace ritescene
