#ifndef RITESCENE_PPM_HPP
#define RITESCENE_PPM_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ritescene/frame.hpp"

namespace ritescene {

// Binary PPM (P6, maxval 255) is the only mandatory image codec.
// Samples decode to value/255 and encode with round-half-up of v*255.
Frame decode_ppm(std::string_view bytes);
std::string encode_ppm(const Frame& frame);

// Binary PGM (P5) carries single-plane images: masks (0/255) and
// grayscale dumps.
Frame decode_pgm(std::string_view bytes);
std::string encode_pgm(const Frame& frame);

Frame read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Frame& frame);
Frame read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ritescene

#endif
