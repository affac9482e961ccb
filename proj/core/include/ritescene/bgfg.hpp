#ifndef RITESCENE_BGFG_HPP
#define RITESCENE_BGFG_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ritescene/frame.hpp"

namespace ritescene {

// Which HSI channel feeds the correlation windows in segment_frame.
enum class SegmentChannel { H = 0, S = 1, I = 2 };

// Per-pixel, per-channel Gaussian statistics over H/S/I.
class BackgroundModel {
public:
    BackgroundModel(int width, int height, double epsilon, double rho);

    int width() const { return width_; }
    int height() const { return height_; }
    double epsilon() const { return epsilon_; }
    double rho() const { return rho_; }
    int training_frames() const { return training_frames_; }

    double mu(int channel, int x, int y) const { return mu_[idx(channel, x, y)]; }
    double sigma(int channel, int x, int y) const { return sigma_[idx(channel, x, y)]; }

    std::span<const double> mu_plane(int channel) const;
    std::span<const double> sigma_plane(int channel) const;

    // The mu planes rendered as an HSI frame (the model's background image).
    Frame mu_frame() const;

    std::string to_json() const;
    static BackgroundModel from_json(const std::string& text);

    friend BackgroundModel fit_background(const std::vector<Frame>& frames,
                                          double epsilon, double rho);
    friend void update_background(BackgroundModel& model, const Frame& frame,
                                  const Frame& mask);

private:
    std::size_t idx(int channel, int x, int y) const {
        return (static_cast<std::size_t>(channel) * height_ + y) * width_ + x;
    }

    int width_;
    int height_;
    double epsilon_;
    double rho_;
    int training_frames_ = 0;
    std::vector<double> mu_;     // 3 planes, H/S/I
    std::vector<double> sigma_;  // 3 planes, floored at epsilon
};

// mu = per-pixel mean, sigma = max(population std, epsilon), from the
// first N >= 2 HSI frames.
BackgroundModel fit_background(const std::vector<Frame>& frames, double epsilon,
                               double rho);

// Gaussian density in the printed form P(x) = exp(-(x-mu)^2/sigma^2) / (sqrt(2 pi) sigma).
// Diagnostic only; segmentation decisions use correlation_distance.
double pixel_probability(const BackgroundModel& model, int channel, double x,
                         int px, int py);

// 1 - Pearson correlation between two windows. Degenerate windows (zero
// centered norm): 0 when the centered windows are equal, else 2.
double correlation_distance(std::span<const double> x, std::span<const double> y);

// Binary plane, 1 = foreground. Stored as a grayscale Frame with {0,1}
// samples so it reuses frame I/O (PGM writes 0/255).
Frame segment_frame(const BackgroundModel& model, const Frame& frame, int window,
                    double threshold, SegmentChannel channel = SegmentChannel::I);

// Selective running update: background-classified pixels get
// mu <- (1-rho) mu + rho x, then sigma^2 <- max(eps^2, (1-rho) sigma^2 + rho (x-mu)^2)
// with the new mu. Foreground pixels keep their statistics.
void update_background(BackgroundModel& model, const Frame& frame, const Frame& mask);

// Mask helpers: encode {0,1} plane as P5 bytes with 0/255 and back.
std::string encode_mask_pgm(const Frame& mask);
Frame decode_mask_pgm(const std::string& bytes);

}  // namespace ritescene

#endif
