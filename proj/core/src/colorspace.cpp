#include "ritescene/colorspace.hpp"

#include <algorithm>
#include <cmath>

#include "ritescene/errors.hpp"

namespace ritescene {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegPerRad = 180.0 / kPi;

void require_colorspace(const Frame& frame, Colorspace cs, const char* op) {
    if (frame.colorspace() != cs)
        throw InvariantError(std::string(op) + ": expected " + to_string(cs) +
                             " frame, got " + to_string(frame.colorspace()));
}
}  // namespace

HsiPixel rgb_pixel_to_hsi(double r, double g, double b) {
    HsiPixel out{};
    const double sum = r + g + b;
    out.i = sum / 3.0;

    const double num = 0.5 * ((r - g) + (r - b));
    const double den = std::sqrt((r - g) * (r - g) + (r - b) * (g - b));
    if (den <= 0.0) {
        out.h = 0.0;
    } else {
        const double theta =
            std::acos(std::clamp(num / den, -1.0, 1.0)) * kDegPerRad;
        double hue_deg = (b > g) ? 360.0 - theta : theta;
        if (hue_deg >= 360.0) hue_deg -= 360.0;
        out.h = hue_deg / 360.0;
    }
    out.s = sum <= 0.0 ? 0.0 : 1.0 - 3.0 * std::min({r, g, b}) / sum;
    out.s = std::clamp(out.s, 0.0, 1.0);
    return out;
}

void hsi_pixel_to_rgb(double h, double s, double i, double& r, double& g, double& b) {
    double hue = h * 360.0;
    auto sector = [&](double hd, double& first, double& second, double& third) {
        const double hr = hd / kDegPerRad;
        first = i * (1.0 - s);
        second = i * (1.0 + s * std::cos(hr) / std::cos((60.0 - hd) / kDegPerRad));
        third = 3.0 * i - (first + second);
    };
    if (hue < 120.0) {
        sector(hue, b, r, g);
    } else if (hue < 240.0) {
        sector(hue - 120.0, r, g, b);
    } else {
        sector(hue - 240.0, g, b, r);
    }
    r = std::clamp(r, 0.0, 1.0);
    g = std::clamp(g, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
}

Frame rgb_to_hsi(const Frame& frame) {
    require_colorspace(frame, Colorspace::Rgb, "rgb_to_hsi");
    Frame out(frame.width(), frame.height(), Colorspace::Hsi);
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            HsiPixel p = rgb_pixel_to_hsi(frame.at(0, x, y), frame.at(1, x, y),
                                          frame.at(2, x, y));
            out.at(0, x, y) = p.h;
            out.at(1, x, y) = p.s;
            out.at(2, x, y) = p.i;
        }
    }
    return out;
}

Frame hsi_to_rgb(const Frame& frame) {
    require_colorspace(frame, Colorspace::Hsi, "hsi_to_rgb");
    Frame out(frame.width(), frame.height(), Colorspace::Rgb);
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            double r, g, b;
            hsi_pixel_to_rgb(frame.at(0, x, y), frame.at(1, x, y),
                             frame.at(2, x, y), r, g, b);
            out.at(0, x, y) = r;
            out.at(1, x, y) = g;
            out.at(2, x, y) = b;
        }
    }
    return out;
}

Frame luminance(const Frame& frame) {
    require_colorspace(frame, Colorspace::Rgb, "luminance");
    Frame out(frame.width(), frame.height(), Colorspace::Gray);
    for (int y = 0; y < frame.height(); ++y)
        for (int x = 0; x < frame.width(); ++x)
            out.at(0, x, y) = 0.299 * frame.at(0, x, y) +
                              0.587 * frame.at(1, x, y) +
                              0.114 * frame.at(2, x, y);
    return out;
}

}  // namespace ritescene
