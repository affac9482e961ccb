#include "ritescene/ppm.hpp"

#include <cmath>
#include <fstream>

#include "ritescene/errors.hpp"

namespace ritescene {

namespace {

struct Cursor {
    std::string_view bytes;
    std::size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }
    char peek() const { return bytes[pos]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("netpbm decode error at byte " + std::to_string(pos) +
                          ": " + what);
    }

    // Netpbm header tokens are separated by whitespace; '#' starts a
    // comment running to end of line.
    void skip_separators() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    }

    int read_int(const char* name) {
        skip_separators();
        if (eof()) fail(std::string("missing ") + name);
        if (peek() < '0' || peek() > '9')
            fail(std::string("expected digit for ") + name);
        long value = 0;
        while (!eof() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + (peek() - '0');
            if (value > 1000000000L) fail(std::string(name) + " out of range");
            ++pos;
        }
        return static_cast<int>(value);
    }
};

Frame decode_netpbm(std::string_view bytes, char magic_digit, Colorspace cs) {
    Cursor cur{bytes};
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != magic_digit) {
        cur.pos = 0;
        cur.fail(std::string("expected magic \"P") + magic_digit + "\"");
    }
    cur.pos = 2;
    int width = cur.read_int("width");
    int height = cur.read_int("height");
    int maxval = cur.read_int("maxval");
    if (width <= 0 || height <= 0) cur.fail("non-positive dimensions");
    if (maxval != 255)
        cur.fail("unsupported maxval " + std::to_string(maxval) + " (want 255)");
    // Exactly one whitespace byte separates the header from raster data.
    if (cur.eof()) cur.fail("missing raster separator");
    char sep = cur.peek();
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
        cur.fail("expected whitespace before raster data");
    ++cur.pos;

    Frame frame(width, height, cs);
    const int channels = cs == Colorspace::Gray ? 1 : 3;
    const std::size_t need =
        static_cast<std::size_t>(width) * height * channels;
    if (bytes.size() - cur.pos < need) {
        const std::size_t have = bytes.size() - cur.pos;
        cur.pos = bytes.size();
        cur.fail("truncated raster: need " + std::to_string(need) +
                 " bytes, have " + std::to_string(have));
    }
    const auto* raw = reinterpret_cast<const std::uint8_t*>(bytes.data() + cur.pos);
    std::size_t idx = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c) {
                frame.at(c, x, y) = static_cast<double>(raw[idx++]) / 255.0;
            }
        }
    }
    return frame;
}

std::uint8_t quantize(double v) {
    double scaled = v * 255.0;
    if (scaled <= 0.0) return 0;
    if (scaled >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::floor(scaled + 0.5));
}

}  // namespace

Frame decode_ppm(std::string_view bytes) {
    return decode_netpbm(bytes, '6', Colorspace::Rgb);
}

Frame decode_pgm(std::string_view bytes) {
    return decode_netpbm(bytes, '5', Colorspace::Gray);
}

std::string encode_ppm(const Frame& frame) {
    if (frame.colorspace() != Colorspace::Rgb)
        throw InvariantError("encode_ppm: frame must be RGB, got " +
                             to_string(frame.colorspace()));
    std::string out = "P6\n" + std::to_string(frame.width()) + " " +
                      std::to_string(frame.height()) + "\n255\n";
    out.reserve(out.size() + frame.pixel_count() * 3);
    for (int y = 0; y < frame.height(); ++y)
        for (int x = 0; x < frame.width(); ++x)
            for (int c = 0; c < 3; ++c)
                out.push_back(static_cast<char>(quantize(frame.at(c, x, y))));
    return out;
}

std::string encode_pgm(const Frame& frame) {
    if (frame.colorspace() != Colorspace::Gray)
        throw InvariantError("encode_pgm: frame must be grayscale, got " +
                             to_string(frame.colorspace()));
    std::string out = "P5\n" + std::to_string(frame.width()) + " " +
                      std::to_string(frame.height()) + "\n255\n";
    out.reserve(out.size() + frame.pixel_count());
    for (int y = 0; y < frame.height(); ++y)
        for (int x = 0; x < frame.width(); ++x)
            out.push_back(static_cast<char>(quantize(frame.at(0, x, y))));
    return out;
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

Frame read_ppm(const std::filesystem::path& path) {
    try {
        return decode_ppm(read_file_bytes(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_ppm(const std::filesystem::path& path, const Frame& frame) {
    write_file_bytes(path, encode_ppm(frame));
}

Frame read_pgm(const std::filesystem::path& path) {
    try {
        return decode_pgm(read_file_bytes(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
    write_file_bytes(path, encode_pgm(frame));
}

}  // namespace ritescene
