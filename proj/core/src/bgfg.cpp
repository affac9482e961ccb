#include "ritescene/bgfg.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "ritescene/base64.hpp"
#include "ritescene/errors.hpp"
#include "ritescene/ppm.hpp"

namespace ritescene {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;

void require_hsi(const Frame& frame, const char* op) {
    if (frame.colorspace() != Colorspace::Hsi)
        throw InvariantError(std::string(op) + ": expected HSI frame, got " +
                             to_string(frame.colorspace()));
}
}  // namespace

BackgroundModel::BackgroundModel(int width, int height, double epsilon, double rho)
    : width_(width), height_(height), epsilon_(epsilon), rho_(rho) {
    if (width <= 0 || height <= 0)
        throw InvariantError("background model dimensions must be positive");
    if (epsilon <= 0.0) throw InvariantError("bg.epsilon must be > 0");
    if (rho < 0.0 || rho > 1.0) throw InvariantError("bg.rho must be in [0,1]");
    const std::size_t n = static_cast<std::size_t>(width) * height * 3;
    mu_.assign(n, 0.0);
    sigma_.assign(n, epsilon);
}

std::span<const double> BackgroundModel::mu_plane(int channel) const {
    return {mu_.data() + static_cast<std::size_t>(channel) * width_ * height_,
            static_cast<std::size_t>(width_) * height_};
}

std::span<const double> BackgroundModel::sigma_plane(int channel) const {
    return {sigma_.data() + static_cast<std::size_t>(channel) * width_ * height_,
            static_cast<std::size_t>(width_) * height_};
}

Frame BackgroundModel::mu_frame() const {
    Frame out(width_, height_, Colorspace::Hsi);
    for (int c = 0; c < 3; ++c) {
        auto src = mu_plane(c);
        auto dst = out.plane(c);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

BackgroundModel fit_background(const std::vector<Frame>& frames, double epsilon,
                               double rho) {
    if (frames.size() < 2)
        throw InvariantError("fit_background: need at least 2 frames, got " +
                             std::to_string(frames.size()));
    for (const auto& f : frames) {
        require_hsi(f, "fit_background");
        require_same_dimensions(frames[0], f, "fit_background");
    }
    const int w = frames[0].width();
    const int h = frames[0].height();
    const double n = static_cast<double>(frames.size());

    BackgroundModel model(w, h, epsilon, rho);
    model.training_frames_ = static_cast<int>(frames.size());
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double sum = 0.0;
                for (const auto& f : frames) sum += f.at(c, x, y);
                const double mean = sum / n;
                double var = 0.0;
                for (const auto& f : frames) {
                    const double d = f.at(c, x, y) - mean;
                    var += d * d;
                }
                var /= n;  // population variance
                const std::size_t i = model.idx(c, x, y);
                model.mu_[i] = mean;
                model.sigma_[i] = std::max(std::sqrt(var), epsilon);
            }
        }
    }
    return model;
}

double pixel_probability(const BackgroundModel& model, int channel, double x,
                         int px, int py) {
    const double mu = model.mu(channel, px, py);
    const double sigma = model.sigma(channel, px, py);
    const double d = x - mu;
    return std::exp(-(d * d) / (sigma * sigma)) / (kSqrt2Pi * sigma);
}

double correlation_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw InvariantError("correlation_distance: window size mismatch");
    if (x.size() < 2)
        throw InvariantError("correlation_distance: windows need >= 2 samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double dot = 0.0, nx = 0.0, ny = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = x[i] - mx;
        const double b = y[i] - my;
        dot += a * b;
        nx += a * a;
        ny += b * b;
    }
    constexpr double kDegenerate = 1e-24;  // squared-norm floor
    if (nx <= kDegenerate || ny <= kDegenerate) {
        // Both windows constant: identical after centering, distance 0.
        // Only one constant: maximally dissimilar, distance 2.
        return (nx <= kDegenerate && ny <= kDegenerate) ? 0.0 : 2.0;
    }
    double corr = dot / (std::sqrt(nx) * std::sqrt(ny));
    corr = std::clamp(corr, -1.0, 1.0);
    return 1.0 - corr;
}

Frame segment_frame(const BackgroundModel& model, const Frame& frame, int window,
                    double threshold, SegmentChannel channel) {
    require_hsi(frame, "segment_frame");
    if (frame.width() != model.width() || frame.height() != model.height())
        throw InvariantError("segment_frame: frame does not match model dimensions");
    if (window < 1 || window % 2 == 0)
        throw InvariantError("segment_frame: window must be odd and >= 1");

    const int w = frame.width();
    const int h = frame.height();
    const int r = window / 2;
    const int c = static_cast<int>(channel);
    const auto mu = model.mu_plane(c);

    Frame mask(w, h, Colorspace::Gray);
    std::vector<double> wx(static_cast<std::size_t>(window) * window);
    std::vector<double> wy(wx.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t i = 0;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    wx[i] = frame.at(c, xx, yy);
                    wy[i] = mu[static_cast<std::size_t>(yy) * w + xx];
                    ++i;
                }
            }
            const double dist = correlation_distance(wx, wy);
            mask.at(0, x, y) = dist < threshold ? 0.0 : 1.0;
        }
    }
    return mask;
}

void update_background(BackgroundModel& model, const Frame& frame, const Frame& mask) {
    require_hsi(frame, "update_background");
    if (frame.width() != model.width() || frame.height() != model.height())
        throw InvariantError("update_background: frame does not match model");
    if (mask.width() != model.width() || mask.height() != model.height())
        throw InvariantError("update_background: mask does not match model");
    const double rho = model.rho_;
    const double eps2 = model.epsilon_ * model.epsilon_;
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < model.height_; ++y) {
            for (int x = 0; x < model.width_; ++x) {
                if (mask.at(0, x, y) != 0.0) continue;  // foreground: untouched
                const std::size_t i = model.idx(c, x, y);
                const double sample = frame.at(c, x, y);
                const double mu = (1.0 - rho) * model.mu_[i] + rho * sample;
                const double d = sample - mu;
                const double var = std::max(
                    eps2, (1.0 - rho) * model.sigma_[i] * model.sigma_[i] + rho * d * d);
                model.mu_[i] = mu;
                model.sigma_[i] = std::sqrt(var);
            }
        }
    }
}

std::string BackgroundModel::to_json() const {
    nlohmann::json doc{
        {"width", width_},
        {"height", height_},
        {"epsilon", epsilon_},
        {"rho", rho_},
        {"training_frames", training_frames_},
        {"mu", doubles_to_base64(mu_)},
        {"sigma", doubles_to_base64(sigma_)},
    };
    return doc.dump(2) + "\n";
}

BackgroundModel BackgroundModel::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("background model: ") + e.what());
    }
    try {
        BackgroundModel model(doc.at("width").get<int>(), doc.at("height").get<int>(),
                              doc.at("epsilon").get<double>(),
                              doc.at("rho").get<double>());
        model.training_frames_ = doc.at("training_frames").get<int>();
        model.mu_ = base64_to_doubles(doc.at("mu").get<std::string>());
        model.sigma_ = base64_to_doubles(doc.at("sigma").get<std::string>());
        const std::size_t expect =
            static_cast<std::size_t>(model.width_) * model.height_ * 3;
        if (model.mu_.size() != expect || model.sigma_.size() != expect)
            throw FormatError("background model: plane size mismatch");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("background model: ") + e.what());
    }
}

std::string encode_mask_pgm(const Frame& mask) {
    Frame scaled(mask.width(), mask.height(), Colorspace::Gray);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            scaled.at(0, x, y) = mask.at(0, x, y) != 0.0 ? 1.0 : 0.0;
    return encode_pgm(scaled);
}

Frame decode_mask_pgm(const std::string& bytes) {
    Frame raw = decode_pgm(bytes);
    Frame mask(raw.width(), raw.height(), Colorspace::Gray);
    for (int y = 0; y < raw.height(); ++y)
        for (int x = 0; x < raw.width(); ++x)
            mask.at(0, x, y) = raw.at(0, x, y) >= 0.5 ? 1.0 : 0.0;
    return mask;
}

}  // namespace ritescene
