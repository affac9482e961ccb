#ifndef RITESCENE_FRAME_HPP
#define RITESCENE_FRAME_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ritescene {

enum class Colorspace { Rgb, Hsi, Gray };

std::string to_string(Colorspace cs);

// One decoded image. Samples are unit-interval doubles throughout the
// pipeline; 8-bit quantization happens only at the PPM/PGM boundary.
// Hue is stored normalized to [0,1) (degrees / 360).
class Frame {
public:
    Frame(int width, int height, Colorspace cs);

    int width() const { return width_; }
    int height() const { return height_; }
    Colorspace colorspace() const { return colorspace_; }
    int plane_count() const { return colorspace_ == Colorspace::Gray ? 1 : 3; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    std::span<double> plane(int p);
    std::span<const double> plane(int p) const;

    double at(int p, int x, int y) const {
        return data_[plane_offset(p) + static_cast<std::size_t>(y) * width_ + x];
    }
    double& at(int p, int x, int y) {
        return data_[plane_offset(p) + static_cast<std::size_t>(y) * width_ + x];
    }

    // at() with edge replication for out-of-bounds coordinates.
    double at_clamped(int p, int x, int y) const;

    bool same_dimensions(const Frame& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    std::size_t plane_offset(int p) const {
        return static_cast<std::size_t>(p) * pixel_count();
    }

    int width_;
    int height_;
    Colorspace colorspace_;
    std::vector<double> data_;
};

// Throws InvariantError unless both frames have equal width and height.
void require_same_dimensions(const Frame& a, const Frame& b, const char* op);

}  // namespace ritescene

#endif
