#ifndef RITESCENE_BASE64_HPP
#define RITESCENE_BASE64_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ritescene {

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::string base64_encode(const std::vector<std::uint8_t>& data);

// Throws FormatError on characters outside the alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Model files store numeric planes as base64 of little-endian IEEE-754
// doubles.
std::string doubles_to_base64(const std::vector<double>& values);
std::vector<double> base64_to_doubles(std::string_view text);

}  // namespace ritescene

#endif
