#include "ritescene/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ritescene/errors.hpp"
#include "ritescene/ppm.hpp"
#include "ritescene/rng.hpp"

namespace ritescene {

const std::array<std::string, 6> kSceneLabels = {
    "tawaf", "say", "arafat", "muzdalifah", "mina", "jamarat"};

namespace {
constexpr double kTau = 6.283185307179586;

struct Palette {
    double lo[3];
    double hi[3];
};

// Distinct dominant hues per family so scene cuts move the hue metric.
const Palette kPalettes[6] = {
    {{0.55, 0.10, 0.10}, {0.95, 0.35, 0.30}},  // tawaf: reds
    {{0.10, 0.45, 0.15}, {0.40, 0.90, 0.45}},  // say: greens
    {{0.10, 0.15, 0.55}, {0.35, 0.45, 0.95}},  // arafat: blues
    {{0.50, 0.45, 0.10}, {0.95, 0.85, 0.35}},  // muzdalifah: yellows
    {{0.45, 0.12, 0.50}, {0.85, 0.40, 0.90}},  // mina: magentas
    {{0.10, 0.45, 0.50}, {0.35, 0.85, 0.90}},  // jamarat: cyans
};

struct Texture {
    int family;
    double p0, p1, p2, p3;  // family-specific jittered parameters
    std::vector<std::pair<double, double>> points;

    // Structural intensity in [0,1].
    double value(double x, double y, int w, int h) const {
        switch (family) {
            case 0: {  // concentric rings
                const double dx = x - p0 * w;
                const double dy = y - p1 * h;
                const double r = std::sqrt(dx * dx + dy * dy);
                return 0.5 + 0.5 * std::sin(kTau * r / p2 + p3);
            }
            case 1: {  // parallel stripes
                const double proj = x * std::cos(p0) + y * std::sin(p0);
                return 0.5 + 0.5 * std::sin(kTau * proj / p1 + p2);
            }
            case 2: {  // blob field
                double v = 0.0;
                for (const auto& [bx, by] : points) {
                    const double dx = x - bx;
                    const double dy = y - by;
                    v += std::exp(-(dx * dx + dy * dy) / (2.0 * p0 * p0));
                }
                return std::min(1.0, v);
            }
            case 3: {  // smooth gradient with a dot lattice
                const double g =
                    0.5 * (x / static_cast<double>(w) + y / static_cast<double>(h));
                double dots = 0.0;
                for (const auto& [bx, by] : points) {
                    const double dx = x - bx;
                    const double dy = y - by;
                    if (dx * dx + dy * dy < p0 * p0) dots = 1.0;
                }
                return std::clamp(0.15 + 0.55 * g + 0.3 * dots, 0.0, 1.0);
            }
            case 4: {  // checkerboard
                const int cx = static_cast<int>(std::floor((x + p1) / p0));
                const int cy = static_cast<int>(std::floor((y + p2) / p0));
                return (cx + cy) % 2 == 0 ? 0.15 : 0.85;
            }
            default: {  // radial spokes
                const double phi = std::atan2(y - p1 * h, x - p0 * w);
                return 0.5 + 0.5 * std::sin(p2 * phi + p3);
            }
        }
    }
};

Texture make_texture(int family, Rng& rng, int w, int h) {
    Texture t;
    t.family = family;
    switch (family) {
        case 0:  // rings: center, period, phase
            t.p0 = rng.uniform(0.35, 0.65);
            t.p1 = rng.uniform(0.35, 0.65);
            t.p2 = rng.uniform(9.0, 14.0);
            t.p3 = rng.uniform(0.0, kTau);
            break;
        case 1:  // stripes: angle near 45 degrees, period, phase
            t.p0 = rng.uniform(0.6, 1.0);
            t.p1 = rng.uniform(7.0, 11.0);
            t.p2 = rng.uniform(0.0, kTau);
            break;
        case 2: {  // blobs: radius + jittered grid
            t.p0 = rng.uniform(3.5, 5.0);
            const int step = 18;
            for (int gy = step / 2; gy < h; gy += step)
                for (int gx = step / 2; gx < w; gx += step)
                    t.points.emplace_back(gx + rng.uniform(-4.0, 4.0),
                                          gy + rng.uniform(-4.0, 4.0));
            break;
        }
        case 3: {  // gradient + dots: dot radius + scattered dots
            t.p0 = rng.uniform(2.2, 3.2);
            const int dots = 28;
            for (int i = 0; i < dots; ++i)
                t.points.emplace_back(rng.uniform(4.0, w - 4.0),
                                      rng.uniform(4.0, h - 4.0));
            break;
        }
        case 4:  // checkers: cell size and offsets
            t.p0 = rng.uniform(9.0, 13.0);
            t.p1 = rng.uniform(0.0, 13.0);
            t.p2 = rng.uniform(0.0, 13.0);
            break;
        default:  // spokes: center, count, phase
            t.p0 = rng.uniform(0.4, 0.6);
            t.p1 = rng.uniform(0.4, 0.6);
            t.p2 = std::floor(rng.uniform(8.0, 14.0));
            t.p3 = rng.uniform(0.0, kTau);
            break;
    }
    return t;
}

struct SquarePath {
    double x, y;    // top-left
    double vx, vy;  // per-frame velocity
    int size;
    double color[3];

    void advance(int w, int h) {
        x += vx;
        y += vy;
        if (x < 0.0 || x + size > w) {
            vx = -vx;
            x = std::clamp(x, 0.0, static_cast<double>(w - size));
        }
        if (y < 0.0 || y + size > h) {
            vy = -vy;
            y = std::clamp(y, 0.0, static_cast<double>(h - size));
        }
    }
};

SquarePath make_square(Rng& rng, int w, int h, int size) {
    SquarePath sq;
    sq.size = size;
    sq.x = rng.uniform(0.0, static_cast<double>(w - size));
    sq.y = rng.uniform(0.0, static_cast<double>(h - size));
    const double speed = rng.uniform(0.8, 1.6);
    const double angle = rng.uniform(0.0, kTau);
    sq.vx = speed * std::cos(angle);
    sq.vy = speed * std::sin(angle);
    // Near-white square, visually distinct from every palette.
    sq.color[0] = rng.uniform(0.9, 1.0);
    sq.color[1] = rng.uniform(0.9, 1.0);
    sq.color[2] = rng.uniform(0.9, 1.0);
    return sq;
}

Frame render_frame(const Texture& tex, const Palette& pal, const SquarePath* square,
                   int w, int h, double noise, Rng& frame_rng) {
    Frame frame(w, h, Colorspace::Rgb);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double t = tex.value(x, y, w, h);
            for (int c = 0; c < 3; ++c)
                frame.at(c, x, y) = pal.lo[c] + (pal.hi[c] - pal.lo[c]) * t;
        }
    }
    if (square) {
        const int x0 = static_cast<int>(std::lround(square->x));
        const int y0 = static_cast<int>(std::lround(square->y));
        for (int y = y0; y < y0 + square->size && y < h; ++y)
            for (int x = x0; x < x0 + square->size && x < w; ++x)
                if (x >= 0 && y >= 0)
                    for (int c = 0; c < 3; ++c) frame.at(c, x, y) = square->color[c];
    }
    if (noise > 0.0) {
        for (int c = 0; c < 3; ++c) {
            auto plane = frame.plane(c);
            for (double& v : plane)
                v = std::clamp(v + frame_rng.uniform(-noise, noise), 0.0, 1.0);
        }
    }
    return frame;
}
}  // namespace

std::vector<Frame> generate_scene_frames(int class_id, std::uint64_t scene_seed,
                                         int frames, int width, int height,
                                         double noise, int square_size) {
    if (class_id < 0 || class_id >= 6)
        throw InvariantError("generate_scene_frames: class_id must be in [0,6)");
    if (width < 32 || height < 32)
        throw InvariantError("generate_scene_frames: scene too small");
    Rng rng(scene_seed);
    const Texture tex = make_texture(class_id, rng, width, height);
    SquarePath square = make_square(rng, width, height, square_size);
    std::vector<Frame> out;
    out.reserve(static_cast<std::size_t>(frames));
    for (int f = 0; f < frames; ++f) {
        Rng frame_rng = rng.fork(static_cast<std::uint64_t>(f));
        out.push_back(render_frame(tex, kPalettes[class_id],
                                   square_size > 0 ? &square : nullptr, width,
                                   height, noise, frame_rng));
        square.advance(width, height);
    }
    return out;
}

std::vector<std::filesystem::path> generate_synthetic(
    const std::filesystem::path& dest, const SynthParams& params) {
    std::error_code ec;
    std::filesystem::create_directories(dest, ec);
    if (ec || !std::filesystem::is_directory(dest))
        throw IoError("cannot create dataset directory " + dest.string());

    Rng master(params.seed);
    std::vector<std::filesystem::path> sample_dirs;
    for (int cls = 0; cls < 6; ++cls) {
        const auto class_dir = dest / kSceneLabels[static_cast<std::size_t>(cls)];
        std::filesystem::create_directories(class_dir, ec);
        if (ec) throw IoError("cannot create " + class_dir.string());
        for (int s = 0; s < params.samples_per_class; ++s) {
            const std::uint64_t scene_seed =
                master.fork(static_cast<std::uint64_t>(cls) * 1000 + s).next_u64();
            char name[32];
            std::snprintf(name, sizeof(name), "sample_%03d", s);
            const auto sample_dir = class_dir / name;
            std::filesystem::create_directories(sample_dir, ec);
            if (ec) throw IoError("cannot create " + sample_dir.string());

            const std::vector<Frame> frames = generate_scene_frames(
                cls, scene_seed, params.frames_per_sample, params.width,
                params.height, params.noise, params.square_size);
            for (std::size_t f = 0; f < frames.size(); ++f) {
                char fname[32];
                std::snprintf(fname, sizeof(fname), "frame_%06zu.ppm", f);
                write_ppm(sample_dir / fname, frames[f]);
            }
            sample_dirs.push_back(sample_dir);
        }
    }
    return sample_dirs;
}

CutVideo generate_cut_video(std::uint64_t seed, int scene_count, int min_scene_len,
                            int max_scene_len, int width, int height, double noise) {
    if (scene_count < 1) throw InvariantError("generate_cut_video: need >= 1 scene");
    Rng rng(seed);
    CutVideo video;
    int family = static_cast<int>(rng.uniform_int(0, 5));
    for (int scene = 0; scene < scene_count; ++scene) {
        if (scene > 0) {
            video.boundaries.push_back(video.frames.size());
            // Next family always differs so consecutive scenes have
            // different palettes.
            family = (family + 1 + static_cast<int>(rng.uniform_int(0, 4))) % 6;
        }
        const int len = static_cast<int>(rng.uniform_int(min_scene_len, max_scene_len));
        const std::uint64_t scene_seed = rng.fork(static_cast<std::uint64_t>(scene)).next_u64();
        std::vector<Frame> frames = generate_scene_frames(family, scene_seed, len,
                                                          width, height, noise, 10);
        for (auto& f : frames) video.frames.push_back(std::move(f));
    }
    return video;
}

SquareScene generate_square_scene(std::uint64_t seed, int clean_frames,
                                  int square_frames, int width, int height,
                                  int square_size, double noise) {
    Rng rng(seed);
    // Stripes have variance in every local window, which keeps the
    // correlation statistic well-defined across the whole frame.
    const Texture tex = make_texture(1, rng, width, height);
    const Palette& pal = kPalettes[1];
    SquarePath square = make_square(rng, width, height, square_size);
    square.color[0] = 0.05;  // dark square on a mid-bright texture
    square.color[1] = 0.05;
    square.color[2] = 0.08;

    SquareScene scene;
    for (int f = 0; f < clean_frames; ++f) {
        Rng frame_rng = rng.fork(static_cast<std::uint64_t>(f));
        scene.frames.push_back(
            render_frame(tex, pal, nullptr, width, height, noise, frame_rng));
        scene.truth.push_back({0, 0, 0, 0});
    }
    for (int f = 0; f < square_frames; ++f) {
        Rng frame_rng = rng.fork(static_cast<std::uint64_t>(clean_frames + f));
        scene.frames.push_back(
            render_frame(tex, pal, &square, width, height, noise, frame_rng));
        const int x0 = static_cast<int>(std::lround(square.x));
        const int y0 = static_cast<int>(std::lround(square.y));
        scene.truth.push_back({x0, y0, std::min(x0 + square_size, width),
                               std::min(y0 + square_size, height)});
        square.advance(width, height);
    }
    return scene;
}

}  // namespace ritescene
