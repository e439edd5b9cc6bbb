#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vjface/image.hpp"

namespace vjface {

// Netpbm raw formats: P5 (gray) and P6 (RGB), maxval 255 only. Header
// comments are accepted; exactly one whitespace byte follows maxval.

GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

GrayImage read_pgm(const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);

/// Reads either P5 or P6; colour input is converted to luma.
GrayImage read_gray(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const GrayImage& img);
/// Debug dump: 0 -> 0, 1 -> 255.
void write_pgm(const std::filesystem::path& path, const BinaryImage& img);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace vjface
