#include "ritescene/frame.hpp"

#include <algorithm>

#include "ritescene/errors.hpp"

namespace ritescene {

std::string to_string(Colorspace cs) {
    switch (cs) {
        case Colorspace::Rgb: return "rgb";
        case Colorspace::Hsi: return "hsi";
        case Colorspace::Gray: return "gray";
    }
    return "?";
}

Frame::Frame(int width, int height, Colorspace cs)
    : width_(width), height_(height), colorspace_(cs) {
    if (width <= 0 || height <= 0)
        throw InvariantError("frame dimensions must be positive, got " +
                             std::to_string(width) + "x" + std::to_string(height));
    data_.assign(pixel_count() * plane_count(), 0.0);
}

std::span<double> Frame::plane(int p) {
    if (p < 0 || p >= plane_count())
        throw InvariantError("plane index " + std::to_string(p) + " out of range");
    return {data_.data() + plane_offset(p), pixel_count()};
}

std::span<const double> Frame::plane(int p) const {
    if (p < 0 || p >= plane_count())
        throw InvariantError("plane index " + std::to_string(p) + " out of range");
    return {data_.data() + plane_offset(p), pixel_count()};
}

double Frame::at_clamped(int p, int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return at(p, x, y);
}

void require_same_dimensions(const Frame& a, const Frame& b, const char* op) {
    if (!a.same_dimensions(b))
        throw InvariantError(std::string(op) + ": dimension mismatch, " +
                             std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                             " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()));
}

}  // namespace ritescene
