#include "ritescene/shotseg.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "ritescene/colorspace.hpp"
#include "ritescene/errors.hpp"

namespace ritescene {

void ShotParams::validate() const {
    if (k < 1) throw InvariantError("shot.k must be >= 1");
    if (motion_threshold < 0.0 || motion_threshold > 1.0)
        throw InvariantError("shot.motion_threshold must be in [0,1]");
    if (block_threshold < 0.0 || block_threshold > 1.0)
        throw InvariantError("shot.block_threshold must be in [0,1]");
    if (block_size < 1) throw InvariantError("shot.block_size must be >= 1");
    if (block_change_level < 0.0 || block_change_level > 1.0)
        throw InvariantError("shot.block_change_level must be in [0,1]");
}

double hue_motion_difference(const Frame& a, const Frame& b) {
    require_same_dimensions(a, b, "hue_motion_difference");
    if (a.colorspace() != Colorspace::Hsi || b.colorspace() != Colorspace::Hsi)
        throw InvariantError("hue_motion_difference: frames must be HSI");
    const auto ha = a.plane(0);
    const auto hb = b.plane(0);
    double sum = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) {
        double d = std::fabs(ha[i] - hb[i]);
        sum += std::min(d, 1.0 - d);
    }
    // Circular distance tops out at 0.5; scale so the metric's range is [0,1].
    return 2.0 * sum / static_cast<double>(ha.size());
}

double block_change_ratio(const Frame& a, const Frame& b, const ShotParams& params) {
    require_same_dimensions(a, b, "block_change_ratio");
    if (a.colorspace() != Colorspace::Rgb || b.colorspace() != Colorspace::Rgb)
        throw InvariantError("block_change_ratio: frames must be RGB");
    params.validate();
    const int bs = params.block_size;
    int changed = 0, total = 0;
    for (int by = 0; by < a.height(); by += bs) {
        for (int bx = 0; bx < a.width(); bx += bs) {
            const int x_end = std::min(bx + bs, a.width());
            const int y_end = std::min(by + bs, a.height());
            double diff = 0.0;
            for (int y = by; y < y_end; ++y)
                for (int x = bx; x < x_end; ++x)
                    for (int c = 0; c < 3; ++c)
                        diff += std::fabs(a.at(c, x, y) - b.at(c, x, y));
            const double samples = 3.0 * (x_end - bx) * (y_end - by);
            ++total;
            if (diff / samples > params.block_change_level) ++changed;
        }
    }
    return static_cast<double>(changed) / static_cast<double>(total);
}

ShotList detect_shots(const FrameSequence& seq, const ShotParams& params) {
    params.validate();
    if (seq.empty()) throw InvariantError("detect_shots: empty sequence");
    const std::size_t n = seq.size();
    const std::size_t k = static_cast<std::size_t>(params.k);

    std::vector<std::size_t> boundaries;
    if (n > k) {
        Frame current = seq.frame(0);
        Frame current_hsi = rgb_to_hsi(current);
        for (std::size_t i = 0; i + k < n; i += k) {
            Frame next = seq.frame(i + k);
            Frame next_hsi = rgb_to_hsi(next);
            const double motion = hue_motion_difference(current_hsi, next_hsi);
            const double blocks = block_change_ratio(current, next, params);
            if (motion > params.motion_threshold && blocks > params.block_threshold)
                boundaries.push_back(i + k);
            current = std::move(next);
            current_hsi = std::move(next_hsi);
        }
    }

    ShotList list;
    list.source_length = n;
    std::size_t start = 0;
    auto close_shot = [&](std::size_t end) {
        Shot shot{start, end, {}};
        for (std::size_t f = start; f < end; f += k) shot.keyframes.push_back(f);
        list.shots.push_back(std::move(shot));
        start = end;
    };
    for (std::size_t b : boundaries) close_shot(b);
    close_shot(n);
    return list;
}

std::string export_shots(const ShotList& shots) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& shot : shots.shots) {
        arr.push_back({{"start", shot.start},
                       {"end", shot.end},
                       {"keyframes", shot.keyframes}});
    }
    nlohmann::json doc{{"source_length", shots.source_length}, {"shots", arr}};
    return doc.dump(2) + "\n";
}

ShotList parse_shots(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("shots report: ") + e.what());
    }
    ShotList list;
    try {
        list.source_length = doc.at("source_length").get<std::size_t>();
        for (const auto& item : doc.at("shots")) {
            Shot shot;
            shot.start = item.at("start").get<std::size_t>();
            shot.end = item.at("end").get<std::size_t>();
            shot.keyframes = item.at("keyframes").get<std::vector<std::size_t>>();
            list.shots.push_back(std::move(shot));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("shots report: ") + e.what());
    }
    return list;
}

}  // namespace ritescene
