#include "ritescene/sift.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ritescene/errors.hpp"

namespace ritescene {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr int kMinOctaveSide = 16;

void require_gray(const Frame& frame, const char* op) {
    if (frame.colorspace() != Colorspace::Gray)
        throw InvariantError(std::string(op) + ": expected grayscale frame, got " +
                             to_string(frame.colorspace()));
}

Frame downsample2(const Frame& src) {
    Frame out(src.width() / 2, src.height() / 2, Colorspace::Gray);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out.at(0, x, y) = src.at(0, 2 * x, 2 * y);
    return out;
}

double wrap_degrees(double deg) {
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg = 0.0;
    return deg;
}
}  // namespace

void PyramidParams::validate() const {
    if (octaves < 1) throw InvariantError("sift.octaves must be >= 1");
    if (scales < 1) throw InvariantError("sift.scales must be >= 1");
    if (sigma <= 0.0) throw InvariantError("sift.sigma must be > 0");
    if (contrast_threshold <= 0.0)
        throw InvariantError("sift.contrast_threshold must be > 0");
    if (edge_ratio <= 1.0) throw InvariantError("sift.edge_ratio must be > 1");
}

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0) throw InvariantError("gaussian_kernel: sigma must be > 0");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        kernel[i + radius] = v;
        sum += v;
    }
    for (double& v : kernel) v /= sum;
    return kernel;
}

Frame gaussian_blur(const Frame& gray, double sigma) {
    require_gray(gray, "gaussian_blur");
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int w = gray.width();
    const int h = gray.height();

    Frame rows(w, h, Colorspace::Gray);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[t + radius] * gray.at_clamped(0, x + t, y);
            rows.at(0, x, y) = acc;
        }
    }
    Frame out(w, h, Colorspace::Gray);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[t + radius] * rows.at_clamped(0, x, y + t);
            out.at(0, x, y) = acc;
        }
    }
    return out;
}

ScaleSpace build_scale_space(const Frame& gray, const PyramidParams& params) {
    require_gray(gray, "build_scale_space");
    params.validate();
    if (gray.width() < kMinOctaveSide || gray.height() < kMinOctaveSide)
        throw InvariantError("build_scale_space: image must be at least 16x16, got " +
                             std::to_string(gray.width()) + "x" +
                             std::to_string(gray.height()));

    int max_octaves = 1;
    for (int side = std::min(gray.width(), gray.height());
         side / 2 >= kMinOctaveSide; side /= 2)
        ++max_octaves;

    ScaleSpace space;
    space.params = params;
    space.octaves_requested = params.octaves;
    space.params.octaves = std::min(params.octaves, max_octaves);

    const int levels = params.scales + 3;
    const double k = params.scale_factor();

    Frame base = gray;
    for (int o = 0; o < space.params.octaves; ++o) {
        ScaleSpace::Octave octave;
        octave.gauss.reserve(levels);
        octave.level_sigma.reserve(levels);
        for (int i = 0; i < levels; ++i) {
            const double level_sigma = params.sigma * std::pow(k, i);
            octave.level_sigma.push_back(level_sigma);
            if (o == 0) {
                // The input is treated as sharp: blur each level directly
                // with its full sigma so DoG responses match the sampled
                // kernel difference exactly.
                octave.gauss.push_back(gaussian_blur(base, level_sigma));
            } else if (i == 0) {
                octave.gauss.push_back(base);
            } else {
                // The downsampled base already carries sigma0 in this
                // octave's pixel units.
                const double extra = std::sqrt(level_sigma * level_sigma -
                                               params.sigma * params.sigma);
                octave.gauss.push_back(gaussian_blur(base, extra));
            }
        }
        for (int i = 0; i + 1 < levels; ++i) {
            Frame d(octave.gauss[i].width(), octave.gauss[i].height(),
                    Colorspace::Gray);
            auto hi = octave.gauss[i + 1].plane(0);
            auto lo = octave.gauss[i].plane(0);
            auto dst = d.plane(0);
            for (std::size_t p = 0; p < dst.size(); ++p) dst[p] = hi[p] - lo[p];
            octave.dog.push_back(std::move(d));
        }
        if (o + 1 < space.params.octaves) {
            // Next octave starts from the level whose blur is 2*sigma0.
            base = downsample2(octave.gauss[params.scales]);
        }
        space.octaves.push_back(std::move(octave));
    }
    return space;
}

std::vector<Keypoint> detect_extrema(const ScaleSpace& space) {
    std::vector<Keypoint> out;
    const double k = space.params.scale_factor();
    for (std::size_t o = 0; o < space.octaves.size(); ++o) {
        const auto& dog = space.octaves[o].dog;
        const double octave_scale = static_cast<double>(1 << o);
        for (std::size_t lvl = 1; lvl + 1 < dog.size(); ++lvl) {
            const Frame& below = dog[lvl - 1];
            const Frame& mid = dog[lvl];
            const Frame& above = dog[lvl + 1];
            for (int y = 1; y + 1 < mid.height(); ++y) {
                for (int x = 1; x + 1 < mid.width(); ++x) {
                    const double v = mid.at(0, x, y);
                    bool is_max = true, is_min = true;
                    for (int dy = -1; dy <= 1 && (is_max || is_min); ++dy) {
                        for (int dx = -1; dx <= 1; ++dx) {
                            for (const Frame* img : {&below, &mid, &above}) {
                                if (img == &mid && dx == 0 && dy == 0) continue;
                                const double nv = img->at(0, x + dx, y + dy);
                                if (nv >= v) is_max = false;
                                if (nv <= v) is_min = false;
                            }
                        }
                    }
                    if (is_max || is_min) {
                        Keypoint kp;
                        kp.x = x * octave_scale;
                        kp.y = y * octave_scale;
                        kp.octave = static_cast<int>(o);
                        kp.level = static_cast<int>(lvl);
                        kp.sigma = space.params.sigma * octave_scale *
                                   std::pow(k, static_cast<double>(lvl));
                        out.push_back(kp);
                    }
                }
            }
        }
    }
    return out;
}

std::vector<Keypoint> filter_keypoints(const std::vector<Keypoint>& candidates,
                                       const ScaleSpace& space,
                                       const PyramidParams& params) {
    std::vector<Keypoint> kept;
    const double r = params.edge_ratio;
    const double ratio_bound = (r + 1.0) * (r + 1.0) / r;
    for (const Keypoint& kp : candidates) {
        const auto& octave = space.octaves.at(static_cast<std::size_t>(kp.octave));
        const Frame& d = octave.dog.at(static_cast<std::size_t>(kp.level));
        const double octave_scale = static_cast<double>(1 << kp.octave);
        const int x = static_cast<int>(kp.x / octave_scale);
        const int y = static_cast<int>(kp.y / octave_scale);

        if (std::fabs(d.at(0, x, y)) < params.contrast_threshold) continue;

        const double dxx = d.at(0, x + 1, y) - 2.0 * d.at(0, x, y) + d.at(0, x - 1, y);
        const double dyy = d.at(0, x, y + 1) - 2.0 * d.at(0, x, y) + d.at(0, x, y - 1);
        const double dxy = (d.at(0, x + 1, y + 1) - d.at(0, x + 1, y - 1) -
                            d.at(0, x - 1, y + 1) + d.at(0, x - 1, y - 1)) /
                           4.0;
        const double det = dxx * dyy - dxy * dxy;
        const double tr = dxx + dyy;
        if (det <= 0.0) continue;
        if (tr * tr / det >= ratio_bound) continue;
        kept.push_back(kp);
    }
    return kept;
}

std::pair<double, double> gradient_at(const Frame& gray, int x, int y) {
    const double dx = gray.at_clamped(0, x + 1, y) - gray.at_clamped(0, x - 1, y);
    const double dy = gray.at_clamped(0, x, y + 1) - gray.at_clamped(0, x, y - 1);
    const double mag = std::sqrt(dx * dx + dy * dy);
    if (mag == 0.0) return {0.0, 0.0};
    return {mag, wrap_degrees(std::atan2(dy, dx) * 180.0 / kPi)};
}

Keypoint assign_orientation(const Keypoint& kp, const ScaleSpace& space) {
    const auto& octave = space.octaves.at(static_cast<std::size_t>(kp.octave));
    const Frame& img = octave.gauss.at(static_cast<std::size_t>(kp.level));
    const double octave_scale = static_cast<double>(1 << kp.octave);
    const int cx = static_cast<int>(kp.x / octave_scale);
    const int cy = static_cast<int>(kp.y / octave_scale);
    const double rel_sigma =
        octave.level_sigma.at(static_cast<std::size_t>(kp.level));
    const int radius = static_cast<int>(std::ceil(4.5 * rel_sigma));
    const double weight_sigma = 1.5 * rel_sigma;

    std::array<double, 36> hist{};
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy > radius * radius) continue;
            auto [mag, ang] = gradient_at(img, cx + dx, cy + dy);
            if (mag == 0.0) continue;
            const double w = mag * std::exp(-(dx * dx + dy * dy) /
                                            (2.0 * weight_sigma * weight_sigma));
            hist[static_cast<std::size_t>(ang / 10.0) % 36] += w;
        }
    }

    Keypoint out = kp;
    const auto peak_it = std::max_element(hist.begin(), hist.end());
    if (*peak_it <= 0.0) {
        out.theta = 0.0;  // flat patch convention
        return out;
    }
    const int p = static_cast<int>(peak_it - hist.begin());
    const double l = hist[(p + 35) % 36];
    const double c = hist[p];
    const double rgt = hist[(p + 1) % 36];
    const double denom = l - 2.0 * c + rgt;
    const double offset = denom == 0.0 ? 0.0 : 0.5 * (l - rgt) / denom;
    out.theta = wrap_degrees((p + 0.5 + offset) * 10.0);
    return out;
}

SiftFeature compute_descriptor(const Keypoint& kp, const ScaleSpace& space) {
    const auto& octave = space.octaves.at(static_cast<std::size_t>(kp.octave));
    const Frame& img = octave.gauss.at(static_cast<std::size_t>(kp.level));
    const double octave_scale = static_cast<double>(1 << kp.octave);
    const double cx = kp.x / octave_scale;
    const double cy = kp.y / octave_scale;
    const double rel_sigma =
        octave.level_sigma.at(static_cast<std::size_t>(kp.level));
    // 4 samples per spatial cell; the 16-sample window spans +-6 sigma.
    const double spacing = 0.75 * rel_sigma;
    const double theta_rad = kp.theta * kPi / 180.0;
    const double cos_t = std::cos(theta_rad);
    const double sin_t = std::sin(theta_rad);

    double hist[4][4][8] = {};
    for (int j = 0; j < 16; ++j) {
        for (int i = 0; i < 16; ++i) {
            const double u = i - 7.5;
            const double v = j - 7.5;
            const double ox = (u * cos_t - v * sin_t) * spacing;
            const double oy = (u * sin_t + v * cos_t) * spacing;
            const int sx = static_cast<int>(std::lround(cx + ox));
            const int sy = static_cast<int>(std::lround(cy + oy));
            auto [mag, ang] = gradient_at(img, sx, sy);
            if (mag == 0.0) continue;
            const double w = mag * std::exp(-(u * u + v * v) / (2.0 * 8.0 * 8.0));

            const double cell_x = (u + 8.0) / 4.0 - 0.5;  // [-0.375, 3.375]
            const double cell_y = (v + 8.0) / 4.0 - 0.5;
            const double rel_ang = wrap_degrees(ang - kp.theta);
            const double ob = rel_ang / 45.0;

            const int x0 = static_cast<int>(std::floor(cell_x));
            const int y0 = static_cast<int>(std::floor(cell_y));
            const int o0 = static_cast<int>(std::floor(ob)) % 8;
            const double fx = cell_x - std::floor(cell_x);
            const double fy = cell_y - std::floor(cell_y);
            const double fo = ob - std::floor(ob);
            for (int dy = 0; dy < 2; ++dy) {
                const int yc = y0 + dy;
                if (yc < 0 || yc > 3) continue;
                const double wy = dy == 0 ? 1.0 - fy : fy;
                for (int dx = 0; dx < 2; ++dx) {
                    const int xc = x0 + dx;
                    if (xc < 0 || xc > 3) continue;
                    const double wx = dx == 0 ? 1.0 - fx : fx;
                    for (int dn = 0; dn < 2; ++dn) {
                        const int oc = (o0 + dn) % 8;
                        const double wo = dn == 0 ? 1.0 - fo : fo;
                        hist[yc][xc][oc] += w * wy * wx * wo;
                    }
                }
            }
        }
    }

    SiftFeature feat;
    feat.keypoint = kp;
    std::size_t n = 0;
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            for (int o = 0; o < 8; ++o) feat.descriptor[n++] = hist[y][x][o];

    auto l2 = [](const std::array<double, 128>& d) {
        double s = 0.0;
        for (double v : d) s += v * v;
        return std::sqrt(s);
    };
    double norm = l2(feat.descriptor);
    if (norm == 0.0) return feat;  // flat patch: all-zero descriptor
    for (double& v : feat.descriptor) v = std::min(v / norm, 0.2);
    norm = l2(feat.descriptor);
    if (norm > 0.0)
        for (double& v : feat.descriptor) v /= norm;
    return feat;
}

std::vector<SiftFeature> extract(const Frame& gray, const PyramidParams& params) {
    const ScaleSpace space = build_scale_space(gray, params);
    const std::vector<Keypoint> candidates = detect_extrema(space);
    const std::vector<Keypoint> kept = filter_keypoints(candidates, space, params);
    std::vector<SiftFeature> out;
    out.reserve(kept.size());
    for (const Keypoint& kp : kept)
        out.push_back(compute_descriptor(assign_orientation(kp, space), space));
    return out;
}

std::string features_to_jsonl(const std::vector<SiftFeature>& feats) {
    std::ostringstream out;
    for (const auto& f : feats) {
        nlohmann::json rec{{"x", f.keypoint.x},
                           {"y", f.keypoint.y},
                           {"sigma", f.keypoint.sigma},
                           {"theta", f.keypoint.theta},
                           {"descriptor", f.descriptor}};
        out << rec.dump() << "\n";
    }
    return out.str();
}

std::vector<SiftFeature> features_from_jsonl(const std::string& text) {
    std::vector<SiftFeature> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            nlohmann::json rec = nlohmann::json::parse(line);
            SiftFeature f;
            f.keypoint.x = rec.at("x").get<double>();
            f.keypoint.y = rec.at("y").get<double>();
            f.keypoint.sigma = rec.at("sigma").get<double>();
            f.keypoint.theta = rec.at("theta").get<double>();
            const auto& d = rec.at("descriptor");
            if (d.size() != 128)
                throw FormatError("descriptor dump line " + std::to_string(line_no) +
                                  ": descriptor length " + std::to_string(d.size()));
            for (std::size_t i = 0; i < 128; ++i)
                f.descriptor[i] = d[i].get<double>();
            out.push_back(std::move(f));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("descriptor dump line " + std::to_string(line_no) +
                              ": " + e.what());
        }
    }
    return out;
}

}  // namespace ritescene
