#ifndef RITESCENE_COLORSPACE_HPP
#define RITESCENE_COLORSPACE_HPP

#include "ritescene/frame.hpp"

namespace ritescene {

struct HsiPixel {
    double h;  // [0,1), degrees/360
    double s;  // [0,1]
    double i;  // [0,1]
};

// HSI conversion. Hue comes from the arccosine form with the B>G
// reflection so the full circle is covered; the cosine argument is
// clamped to [-1,1] against floating-point drift. Achromatic pixels
// (zero denominator) take H=0, black takes S=0.
HsiPixel rgb_pixel_to_hsi(double r, double g, double b);

// Inverse transform (sector form). Out-of-gamut results are clamped to
// [0,1].
void hsi_pixel_to_rgb(double h, double s, double i, double& r, double& g, double& b);

Frame rgb_to_hsi(const Frame& frame);
Frame hsi_to_rgb(const Frame& frame);

// Y = 0.299 R + 0.587 G + 0.114 B.
Frame luminance(const Frame& frame);

}  // namespace ritescene

#endif
